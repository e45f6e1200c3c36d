//! Futaki-type obstructions on the momentum interval.
//!
//! Elements of the Reeb torus algebra are affine functions `ℓ(z) = sz + i`;
//! the Reeb field itself is `ℓ_K = az + b`. All pairings drop positive overall
//! constants, so every value here is faithful in sign and in ratios only.

mod csc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::admissible::{curvature_sum, fiber_polynomial, AdmissibleData, WeightParams};
use crate::exactalg::rational::serde_rational;
use crate::exactalg::{int, moment, AlgebraError, LogPolynomialValue, Polynomial, Rational, Sign};
use crate::solver::{solve_extremal, ExtremalSolution, SolverError};

pub use csc::{find_csc, CscOptions, CscRay, CscSearch, RayLocation, RayMethod};

/// Default cap on the bits of precision used for certified signs.
pub const DEFAULT_MAX_PREC: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FutakiError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("moment matrix is singular")]
    SingularMoments,
    #[error("invalid search interval: {0}")]
    InvalidSearch(String),
    #[error("symbolic elimination overflow (degree {degree}, coefficient bits {bits})")]
    SymbolicEliminationOverflow { degree: usize, bits: u64 },
    #[error("z0 must lie in (-1, 1)")]
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineFn {
    #[serde(with = "serde_rational")]
    pub slope: Rational,
    #[serde(with = "serde_rational")]
    pub intercept: Rational,
}

impl AffineFn {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        AffineFn { slope, intercept }
    }

    pub fn reeb(w: &WeightParams) -> Self {
        AffineFn::new(w.a.clone(), w.b.clone())
    }

    pub fn extremal(sol: &ExtremalSolution) -> Self {
        AffineFn::new(sol.a_ext.clone(), sol.b_ext.clone())
    }

    pub fn to_poly(&self) -> Polynomial {
        Polynomial::linear(self.slope.clone(), self.intercept.clone())
    }

    pub fn combine(&self, alpha: &Rational, other: &AffineFn, beta: &Rational) -> AffineFn {
        AffineFn::new(
            alpha * &self.slope + beta * &other.slope,
            alpha * &self.intercept + beta * &other.intercept,
        )
    }
}

/// `num / den` with both parts exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRatio {
    pub num: LogPolynomialValue,
    pub den: LogPolynomialValue,
}

impl LogRatio {
    /// The ratio as a rational number when `num` is an exact rational multiple of `den`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.den.is_zero() {
            return None;
        }
        if self.num.is_zero() {
            return Some(int(0));
        }
        let Some((dc, key)) = self.den.terms().max_by_key(|(_, k)| k.len()) else {
            return Some(self.num.as_rational()? / self.den.constant());
        };
        let nc = self
            .num
            .terms()
            .find(|(_, k)| *k == key)
            .map(|(c, _)| c.clone())?;
        let q = nc / dc;
        (self.den.scale(&q) == self.num).then_some(q)
    }

    pub fn certify(&self, max_prec: u32) -> FutakiValue {
        FutakiValue::certify(self.num.clone(), self.den.clone(), max_prec)
    }
}

/// An exact value `exact / den` with a certified sign and a float enclosure
/// `numeric ± err`.
#[derive(Debug, Clone, PartialEq)]
pub struct FutakiValue {
    pub exact: LogPolynomialValue,
    pub den: LogPolynomialValue,
    pub numeric: f64,
    pub err: f64,
    pub sign: Sign,
}

impl FutakiValue {
    pub fn certify(exact: LogPolynomialValue, den: LogPolynomialValue, max_prec: u32) -> Self {
        let (sn, ivn) = exact.sign_with_enclosure(max_prec);
        let (sd, ivd) = den.sign_with_enclosure(max_prec);
        let sign = sn.mul(sd);
        let (numeric, err) = match ivn.div(&ivd, 128) {
            Some(q) => {
                let mid = q.mid_f64();
                (mid, q.radius_f64() + mid.abs() * f64::EPSILON)
            }
            None => (f64::NAN, f64::INFINITY),
        };
        FutakiValue {
            exact,
            den,
            numeric,
            err,
            sign,
        }
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        LogRatio {
            num: self.exact.clone(),
            den: self.den.clone(),
        }
        .to_rational()
    }
}

impl Serialize for FutakiValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FutakiValue", 5)?;
        st.serialize_field("num", &self.exact)?;
        st.serialize_field("den", &self.den)?;
        st.serialize_field("float", &self.numeric)?;
        st.serialize_field("err", &self.err)?;
        st.serialize_field("sign", self.sign.symbol())?;
        st.end()
    }
}

fn require_interior(w: &WeightParams) -> Result<(), FutakiError> {
    if !w.is_interior() {
        return Err(AlgebraError::PoleOnInterval.into());
    }
    Ok(())
}

/// `∫ q(z) (az + b)^{-n} dz` over `[-1, 1]` for a polynomial `q`.
fn weighted_integral(q: &Polynomial, n: usize, w: &WeightParams) -> Result<LogPolynomialValue, AlgebraError> {
    let mut acc = LogPolynomialValue::zero();
    for (k, c) in q.coeffs().iter().enumerate() {
        if c == &int(0) {
            continue;
        }
        acc = &acc + &moment(k, n, &w.a, &w.b)?.scale(c);
    }
    Ok(acc)
}

/// `⟪ℓ1, ℓ2⟫ = ∫ ℓ1 ℓ2 (az + b)^{-exponent} p_c dz` over `[-1, 1]`.
pub fn pairing(
    l1: &AffineFn,
    l2: &AffineFn,
    data: &AdmissibleData,
    w: &WeightParams,
    exponent: usize,
) -> Result<LogPolynomialValue, FutakiError> {
    require_interior(w)?;
    let q = &(&l1.to_poly() * &l2.to_poly()) * &fiber_polynomial(data);
    Ok(weighted_integral(&q, exponent, w)?)
}

/// Weights for the integrated form of the weighted extremal equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IbpWeights {
    /// Polynomial `v`, `w`.
    Polynomial { v: Polynomial, w: Polynomial },
    /// `v = (az + b)^{-m-1}`, `w = (az + b)^{-m-3}`.
    Sasaki(WeightParams),
}

/// `(A, B)` from integrating the weighted equation against `1` and `z`, where
/// the left side collapses to boundary data:
///
/// ```text
/// A μ1 + B μ0 = ∫ v S + 2 v(1) p_c(1) + 2 v(-1) p_c(-1)
/// A μ2 + B μ1 = ∫ z v S + 2 v(1) p_c(1) - 2 v(-1) p_c(-1),   μk = ∫ z^k w p_c
/// ```
pub fn extremal_affine_ibp(data: &AdmissibleData, weights: &IbpWeights) -> Result<(LogRatio, LogRatio), FutakiError> {
    let m = data.m();
    let pc = fiber_polynomial(data);
    let s = curvature_sum(data);
    let z = Polynomial::z();
    let (one, minus_one) = (int(1), int(-1));
    let lp = LogPolynomialValue::rational;

    let (mu, src, src_z, v_hi, v_lo) = match weights {
        IbpWeights::Polynomial { v, w } => {
            let wpc = w * &pc;
            let vs = v * &s;
            let int_ = |p: &Polynomial| lp(p.definite_integral(&minus_one, &one));
            (
                [int_(&wpc), int_(&(&z * &wpc)), int_(&(&(&z * &z) * &wpc))],
                int_(&vs),
                int_(&(&z * &vs)),
                v.eval(&one),
                v.eval(&minus_one),
            )
        }
        IbpWeights::Sasaki(wp) => {
            require_interior(wp)?;
            let e = m as i64 + 1;
            let pow = |x: Rational| -> Rational { num_traits::pow(x, e as usize).recip() };
            (
                [
                    weighted_integral(&pc, m + 3, wp)?,
                    weighted_integral(&(&z * &pc), m + 3, wp)?,
                    weighted_integral(&(&(&z * &z) * &pc), m + 3, wp)?,
                ],
                weighted_integral(&s, m + 1, wp)?,
                weighted_integral(&(&z * &s), m + 1, wp)?,
                pow(&wp.b + &wp.a),
                pow(&wp.b - &wp.a),
            )
        }
    };
    let hi = int(2) * v_hi * pc.eval(&one);
    let lo = int(2) * v_lo * pc.eval(&minus_one);
    let r0 = &src + &lp(&hi + &lo);
    let r1 = &src_z + &lp(&hi - &lo);
    // [[μ1, μ0], [μ2, μ1]] (A, B) = (r0, r1)
    let det = &(&mu[1] * &mu[1]) - &(&mu[0] * &mu[2]);
    if det.is_zero() {
        return Err(FutakiError::SingularMoments);
    }
    let a_num = &(&r0 * &mu[1]) - &(&mu[0] * &r1);
    let b_num = &(&mu[1] * &r1) - &(&mu[2] * &r0);
    Ok((
        LogRatio {
            num: a_num,
            den: det.clone(),
        },
        LogRatio { num: b_num, den: det },
    ))
}

/// `c_K = ⟪ℓ_ext, ℓ_K⟫ / ⟪ℓ_K, ℓ_K⟫` with exponent `m + 3`.
pub fn c_k(
    data: &AdmissibleData,
    w: &WeightParams,
    ell_ext: &AffineFn,
    max_prec: u32,
) -> Result<FutakiValue, FutakiError> {
    let e = data.m() + 3;
    let lk = AffineFn::reeb(w);
    let num = pairing(ell_ext, &lk, data, w, e)?;
    let den = pairing(&lk, &lk, data, w, e)?;
    Ok(FutakiValue::certify(num, den, max_prec))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CscType {
    /// `ℓ_ext` is not proportional to `ℓ_K`.
    NotCsc,
    /// `ℓ_ext = c ℓ_K` with `c ≠ m(m + 1)`.
    Csc {
        #[serde(with = "serde_rational")]
        c_k: Rational,
    },
    /// `ℓ_ext = m(m + 1) ℓ_K`.
    ScalarFlatCone,
}

/// Classification by proportionality `A b = B a`; then `c_K = B / b`.
pub fn csc_type(data: &AdmissibleData, w: &WeightParams, ell_ext: &AffineFn) -> CscType {
    if &ell_ext.slope * &w.b != &ell_ext.intercept * &w.a {
        return CscType::NotCsc;
    }
    let c = &ell_ext.intercept / &w.b;
    let m = data.m() as i64;
    if c == int(m * (m + 1)) {
        CscType::ScalarFlatCone
    } else {
        CscType::Csc { c_k: c }
    }
}

/// Scaled Futaki invariant `⟪ℓ_ext, ℓ_Z⟫⟪ℓ_K, ℓ_K⟫ - ⟪ℓ_ext, ℓ_K⟫⟪ℓ_K, ℓ_Z⟫`,
/// a positive multiple of `Fut_K(Z)`, for a given `ℓ_ext`.
pub fn futaki_with(
    data: &AdmissibleData,
    w: &WeightParams,
    ell_ext: &AffineFn,
    ell_z: &AffineFn,
    max_prec: u32,
) -> Result<FutakiValue, FutakiError> {
    let e = data.m() + 3;
    let lk = AffineFn::reeb(w);
    let p = |x: &AffineFn, y: &AffineFn| pairing(x, y, data, w, e);
    let det = &(&p(ell_ext, ell_z)? * &p(&lk, &lk)?) - &(&p(ell_ext, &lk)? * &p(&lk, ell_z)?);
    Ok(FutakiValue::certify(det, LogPolynomialValue::rational(int(1)), max_prec))
}

/// [`futaki_with`] using `ℓ_ext` from the extremal solver.
pub fn futaki(
    data: &AdmissibleData,
    w: &WeightParams,
    ell_z: &AffineFn,
    max_prec: u32,
) -> Result<FutakiValue, FutakiError> {
    require_interior(w)?;
    let sol = solve_extremal(data, w)?;
    futaki_with(data, w, &AffineFn::extremal(&sol), ell_z, max_prec)
}

/// `Θ^ext(z0)`, a positive multiple of the Donaldson-Futaki invariant of the
/// degeneration to the normal cone of the fibre over `z0`.
pub fn df_indicator(data: &AdmissibleData, w: &WeightParams, z0: &Rational) -> Result<Rational, FutakiError> {
    if z0 <= &int(-1) || z0 >= &int(1) {
        return Err(FutakiError::OutOfRange);
    }
    let sol = solve_extremal(data, w)?;
    Ok(sol.f.eval(z0) / sol.fiber().eval(z0))
}

/// `(A^{m+2} F(-B/A), A^{m+1} F'(-B/A))` expanded without division. For
/// `A = 0` the root sits at infinity and the pair is `(F_{m+2}, F_{m+1})`.
pub fn double_root_defect_parts(f: &Polynomial, a_ext: &Rational, b_ext: &Rational, m: usize) -> (Rational, Rational) {
    let n = m + 2;
    if a_ext == &int(0) {
        return (f.coeff(n), f.coeff(n - 1));
    }
    let nb = -b_ext;
    let pw = |x: &Rational, k: usize| num_traits::pow(x.clone(), k);
    let mut d0 = int(0);
    let mut d1 = int(0);
    for i in 0..=n {
        let fi = f.coeff(i);
        if fi == int(0) {
            continue;
        }
        d0 += &fi * pw(&nb, i) * pw(a_ext, n - i);
        if i > 0 {
            d1 += &fi * int(i as i64) * pw(&nb, i - 1) * pw(a_ext, n - i);
        }
    }
    (d0, d1)
}

pub fn double_root_defect(sol: &ExtremalSolution) -> (Rational, Rational) {
    double_root_defect_parts(&sol.f, &sol.a_ext, &sol.b_ext, sol.data.m())
}
