//! CSC rays in the slice `{b fixed}` of the Reeb cone: zeros of
//! `D(a) = A(a) b - B(a) a`, where `ℓ_ext` becomes proportional to `ℓ_K`.

use num_traits::{Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::FutakiError;
use crate::admissible::{validate, AdmissibleData, WeightParams};
use crate::exactalg::rational::{format_rational, simplest_between};
use crate::exactalg::sturm::{rational_root_in, refine};
use crate::exactalg::{int, isolate_roots, rat, IsolatingInterval, Rational};
use crate::solver::parametric::{solve_symbolic, EliminationCaps, ParametricError};
use crate::solver::{existence_verdict, solve_extremal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CscOptions {
    pub caps: EliminationCaps,
    /// Bisect `D` on a grid when the symbolic elimination overflows.
    pub fallback: bool,
    /// Grid cells for the fallback.
    pub grid: usize,
}

impl Default for CscOptions {
    fn default() -> Self {
        CscOptions {
            caps: EliminationCaps::default(),
            fallback: true,
            grid: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RayLocation {
    Exact(Rational),
    /// The unique zero of `D` lies in the open interval.
    Isolated { lo: Rational, hi: Rational },
}

impl RayLocation {
    pub fn contains(&self, a: &Rational) -> bool {
        match self {
            RayLocation::Exact(r) => r == a,
            RayLocation::Isolated { lo, hi } => lo < a && a < hi,
        }
    }
}

impl Serialize for RayLocation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RayLocation::Exact(r) => s.serialize_str(&format_rational(r)),
            RayLocation::Isolated { lo, hi } => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&format_rational(lo))?;
                seq.serialize_element(&format_rational(hi))?;
                seq.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RayMethod {
    Sturm,
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CscRay {
    pub a: RayLocation,
    /// Rational slope inside the location at which existence was tested.
    #[serde(serialize_with = "crate::exactalg::rational::serde_rational::serialize")]
    pub probe: Rational,
    pub exists: bool,
    pub method: RayMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CscSearch {
    /// `D` vanishes for every `a`.
    IdenticallyZero,
    Rays(Vec<CscRay>),
}

impl CscSearch {
    pub fn contains(&self, a: &Rational) -> bool {
        match self {
            CscSearch::IdenticallyZero => true,
            CscSearch::Rays(rays) => rays.iter().any(|r| r.a.contains(a)),
        }
    }
}

/// Width to which isolating intervals are shrunk before probing existence.
fn probe_width() -> Rational {
    rat(1, 1 << 20)
}

fn check_search(b: &Rational, lo: &Rational, hi: &Rational) -> Result<(), FutakiError> {
    if !b.is_positive() {
        return Err(FutakiError::InvalidSearch("b must be positive".into()));
    }
    if lo > hi || lo <= &-b || hi >= b {
        return Err(FutakiError::InvalidSearch(format!(
            "[{}, {}] is not inside (-b, b)",
            format_rational(lo),
            format_rational(hi)
        )));
    }
    Ok(())
}

fn ray(data: &AdmissibleData, b: &Rational, a: RayLocation, probe: Rational, method: RayMethod) -> Result<CscRay, FutakiError> {
    let sol = solve_extremal(data, &WeightParams::new(probe.clone(), b.clone()))?;
    let exists = existence_verdict(&sol)?.exists;
    Ok(CscRay {
        a,
        probe,
        exists,
        method,
    })
}

/// CSC rays `a` in `[lo, hi]` for the fixed intercept `b`.
///
/// `A(a)` and `B(a)` come from fraction-free elimination over `Q[a]`; the
/// numerator of the reduced `D` is isolated by Sturm sequences. If the
/// elimination exceeds `options.caps`, zeros are bracketed instead by exact
/// sign bisection of `D` on a grid, which finds every zero of odd
/// multiplicity that is separated by the grid.
pub fn find_csc(
    data: &AdmissibleData,
    b: &Rational,
    search: (&Rational, &Rational),
    options: CscOptions,
) -> Result<CscSearch, FutakiError> {
    let (lo, hi) = search;
    check_search(b, lo, hi)?;
    let report = validate(data, &WeightParams::new(int(0), b.clone()), false);
    if !report.is_ok() {
        return Err(crate::solver::SolverError::Validation(report.messages()).into());
    }
    match solve_symbolic(data, b, options.caps) {
        Ok(sym) => {
            let d = sym.csc_defect();
            if d.is_zero() {
                return Ok(CscSearch::IdenticallyZero);
            }
            let num = d.num();
            if num.is_constant() {
                return Ok(CscSearch::Rays(Vec::new()));
            }
            let mut rays = Vec::new();
            for iv in isolate_roots(num, lo, hi)? {
                let (loc, probe) = locate(num, &iv);
                rays.push(ray(data, b, loc, probe, RayMethod::Sturm)?);
            }
            Ok(CscSearch::Rays(rays))
        }
        Err(ParametricError::Singular) => Err(crate::solver::SolverError::SingularSystem.into()),
        Err(ParametricError::Overflow { degree, bits }) => {
            if !options.fallback {
                return Err(FutakiError::SymbolicEliminationOverflow { degree, bits });
            }
            bisect_grid(data, b, lo, hi, options.grid.max(1)).map(CscSearch::Rays)
        }
    }
}

fn locate(num: &crate::exactalg::Polynomial, iv: &IsolatingInterval) -> (RayLocation, Rational) {
    if let Some(r) = rational_root_in(num, iv) {
        return (RayLocation::Exact(r.clone()), r);
    }
    let tight = refine(num, iv, &probe_width());
    if tight.is_exact() {
        return (RayLocation::Exact(tight.lo.clone()), tight.lo);
    }
    let probe = simplest_between(&tight.lo, &tight.hi);
    (
        RayLocation::Isolated {
            lo: tight.lo,
            hi: tight.hi,
        },
        probe,
    )
}

fn defect_at(data: &AdmissibleData, a: &Rational, b: &Rational) -> Result<Rational, FutakiError> {
    let sol = solve_extremal(data, &WeightParams::new(a.clone(), b.clone()))?;
    Ok(&sol.a_ext * b - &sol.b_ext * a)
}

fn bisect_grid(
    data: &AdmissibleData,
    b: &Rational,
    lo: &Rational,
    hi: &Rational,
    cells: usize,
) -> Result<Vec<CscRay>, FutakiError> {
    let step = (hi - lo) / int(cells as i64);
    let points: Vec<Rational> = (0..=cells).map(|i| lo + &step * int(i as i64)).collect();
    let values = points
        .iter()
        .map(|a| defect_at(data, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rays = Vec::new();
    for i in 0..=cells {
        if values[i].is_zero() {
            rays.push(ray(data, b, RayLocation::Exact(points[i].clone()), points[i].clone(), RayMethod::Bisection)?);
            continue;
        }
        if i == cells || values[i + 1].is_zero() || values[i].signum() == values[i + 1].signum() {
            continue;
        }
        let (mut l, mut h) = (points[i].clone(), points[i + 1].clone());
        let lo_sign = values[i].signum();
        let mut exact = None;
        while &h - &l > probe_width() {
            let mid = (&l + &h) / int(2);
            let v = defect_at(data, &mid, b)?;
            if v.is_zero() {
                exact = Some(mid);
                break;
            }
            if v.signum() == lo_sign {
                l = mid;
            } else {
                h = mid;
            }
        }
        let r = match exact {
            Some(a) => ray(data, b, RayLocation::Exact(a.clone()), a, RayMethod::Bisection)?,
            None => {
                let probe = simplest_between(&l, &h);
                ray(data, b, RayLocation::Isolated { lo: l, hi: h }, probe, RayMethod::Bisection)?
            }
        };
        rays.push(r);
    }
    Ok(rays)
}
