//! Exact solutions of the momentum-profile boundary value problems.
//!
//! The extremal profile `Θ` enters through `F = p_c Θ`, which solves
//!
//! ```text
//! (az+b)^2 F'' - 2a(m+1)(az+b) F' + a^2 (m+1)(m+2) F = S(z)(az+b)^2 - (Az+B) p_c(z)
//! ```
//!
//! with `F(±1) = 0` and `F'(±1) = ∓2 p_c(±1)`. For `a ≠ 0` the powers
//! `(az+b)^s` are eigenfunctions of the left side with eigenvalue
//! `a^2 (s-m-1)(s-m-2)`, so the particular part is read off the shifted basis
//! and only `p_{m+1}, p_{m+2}, A, B` remain for the boundary system. For
//! `a = 0` the operator is `b^2 F''` and the particular part is a double
//! antiderivative.

mod existence;
pub mod parametric;
mod perturb;
mod weighted;

use num_traits::Zero;
use serde::Serialize;

use crate::admissible::{
    curvature_sum, fiber_polynomial, validate, AdmissibleData, ValidationWarning, WeightParams,
};
use crate::exactalg::linsolve::solve_rational;
use crate::exactalg::{int, AlgebraError, Polynomial, Rational, RationalFunction};

pub use existence::{existence_for_profile, existence_verdict, ExistenceReport};
pub use perturb::perturbation_pair;
pub use weighted::{solve_weighted, WeightedSolution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid parameters: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("boundary system is singular")]
    SingularSystem,
    #[error("weight function is not positive on [-1, 1]")]
    NonPositiveWeight,
    #[error("extremal affine function vanishes identically")]
    DegenerateExtremalAffine,
    #[error("internal identity check failed: {0}")]
    IdentityViolated(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    #[serde(rename = "eigen")]
    EigenBasis,
    #[serde(rename = "doubleint")]
    DoubleIntegration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalSolution {
    /// `F = p_c Θ`, degree at most `m + 2`.
    pub f: Polynomial,
    /// Slope `A` of the extremal affine function.
    pub a_ext: Rational,
    /// Intercept `B` of the extremal affine function.
    pub b_ext: Rational,
    pub mode: SolveMode,
    pub data: AdmissibleData,
    pub weight: WeightParams,
    pub warnings: Vec<ValidationWarning>,
}

impl ExtremalSolution {
    pub fn fiber(&self) -> Polynomial {
        fiber_polynomial(&self.data)
    }

    /// `Θ = F / p_c`, reduced.
    pub fn theta(&self) -> RationalFunction {
        RationalFunction::new(self.f.clone(), self.fiber()).expect("p_c is nonzero")
    }
}

/// Anything that carries a momentum profile.
pub trait ProfileSource {
    fn theta(&self) -> RationalFunction;
}

impl ProfileSource for ExtremalSolution {
    fn theta(&self) -> RationalFunction {
        ExtremalSolution::theta(self)
    }
}

impl ProfileSource for WeightedSolution {
    fn theta(&self) -> RationalFunction {
        WeightedSolution::theta(self)
    }
}

pub fn theta_profile<T: ProfileSource>(sol: &T) -> RationalFunction {
    sol.theta()
}

/// `F = base + sum_i u_i phi_i` for four unknowns `u_i`, fixed by
/// `F(1) = 0, F(-1) = 0, F'(1) = slope_hi, F'(-1) = slope_lo`.
pub(crate) fn solve_boundary(
    base: &Polynomial,
    phis: &[Polynomial; 4],
    slope_hi: &Rational,
    slope_lo: &Rational,
) -> Result<[Rational; 4], SolverError> {
    let (one, minus_one) = (int(1), int(-1));
    let dphis: Vec<Polynomial> = phis.iter().map(Polynomial::derivative).collect();
    let dbase = base.derivative();
    let matrix = vec![
        phis.iter().map(|p| p.eval(&one)).collect::<Vec<_>>(),
        phis.iter().map(|p| p.eval(&minus_one)).collect(),
        dphis.iter().map(|p| p.eval(&one)).collect(),
        dphis.iter().map(|p| p.eval(&minus_one)).collect(),
    ];
    let rhs = vec![
        -base.eval(&one),
        -base.eval(&minus_one),
        slope_hi - dbase.eval(&one),
        slope_lo - dbase.eval(&minus_one),
    ];
    let x = solve_rational(&matrix, &rhs).ok_or(SolverError::SingularSystem)?;
    Ok([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()])
}

pub(crate) fn combine(base: &Polynomial, phis: &[Polynomial], coeffs: &[Rational]) -> Polynomial {
    phis.iter()
        .zip(coeffs)
        .fold(base.clone(), |acc, (p, c)| &acc + &p.scale(c))
}

fn validated(data: &AdmissibleData, w: &WeightParams) -> Result<Vec<ValidationWarning>, SolverError> {
    let report = validate(data, w, true);
    if !report.is_ok() {
        return Err(SolverError::Validation(report.messages()));
    }
    Ok(report.warnings)
}

/// The operator `L[F] = f^2 F'' - 2a(m+1) f F' + a^2 (m+1)(m+2) F`, `f = a z + b`.
pub fn extremal_operator(f_poly: &Polynomial, w: &WeightParams, m: usize) -> Polynomial {
    let f = w.affine();
    let m1 = int(m as i64 + 1);
    let m2 = int(m as i64 + 2);
    let t1 = &(&f * &f) * &f_poly.derivative().derivative();
    let t2 = (&f * &f_poly.derivative()).scale(&(int(-2) * &w.a * &m1));
    let t3 = f_poly.scale(&(&w.a * &w.a * &m1 * &m2));
    &(&t1 + &t2) + &t3
}

/// Right side `S f^2 - (Az + B) p_c`.
pub fn extremal_source(data: &AdmissibleData, w: &WeightParams, a_ext: &Rational, b_ext: &Rational) -> Polynomial {
    let f = w.affine();
    let pc = fiber_polynomial(data);
    let s = curvature_sum(data);
    &(&s * &(&f * &f)) - &(&Polynomial::linear(a_ext.clone(), b_ext.clone()) * &pc)
}

pub fn solve_extremal(data: &AdmissibleData, w: &WeightParams) -> Result<ExtremalSolution, SolverError> {
    let warnings = validated(data, w)?;
    let m = data.m();
    let pc = fiber_polynomial(data);
    let s = curvature_sum(data);
    let f = w.affine();
    let z = Polynomial::z();

    // source split as R0 + A * RA + B * RB
    let r0 = &s * &(&f * &f);
    let ra = -&(&z * &pc);
    let rb = -&pc;

    let (mode, base, phis) = if w.a.is_zero() {
        // b^2 F'' = source
        let inv_b2 = (&w.b * &w.b).recip();
        let twice = |p: &Polynomial| p.scale(&inv_b2).antiderivative().antiderivative();
        (
            SolveMode::DoubleIntegration,
            twice(&r0),
            [Polynomial::one(), z.clone(), twice(&ra), twice(&rb)],
        )
    } else {
        let particular = |p: &Polynomial| -> Result<Polynomial, SolverError> {
            let q = p.shift_basis(&w.a, &w.b)?;
            if q.len() > m + 1 {
                return Err(SolverError::IdentityViolated("source degree exceeds m"));
            }
            let coeffs: Vec<Rational> = q
                .iter()
                .enumerate()
                .map(|(s, c)| {
                    let s = s as i64;
                    let ev = &w.a * &w.a * int((s - m as i64 - 1) * (s - m as i64 - 2));
                    c / ev
                })
                .collect();
            Ok(Polynomial::from_shift_basis(&coeffs, &w.a, &w.b))
        };
        (
            SolveMode::EigenBasis,
            particular(&r0)?,
            [f.pow(m + 1), f.pow(m + 2), particular(&ra)?, particular(&rb)?],
        )
    };

    let (one, minus_one) = (int(1), int(-1));
    let slope_hi = int(-2) * pc.eval(&one);
    let slope_lo = int(2) * pc.eval(&minus_one);
    let u = solve_boundary(&base, &phis, &slope_hi, &slope_lo)?;
    let f_sol = combine(&base, &phis, &u);
    let sol = ExtremalSolution {
        f: f_sol,
        a_ext: u[2].clone(),
        b_ext: u[3].clone(),
        mode,
        data: data.clone(),
        weight: w.clone(),
        warnings,
    };
    check_extremal(&sol)?;
    Ok(sol)
}

/// ODE residual and the four boundary equalities, all exact.
fn check_extremal(sol: &ExtremalSolution) -> Result<(), SolverError> {
    let m = sol.data.m();
    let lhs = extremal_operator(&sol.f, &sol.weight, m);
    let rhs = extremal_source(&sol.data, &sol.weight, &sol.a_ext, &sol.b_ext);
    if lhs != rhs {
        return Err(SolverError::IdentityViolated("extremal ODE residual"));
    }
    let pc = sol.fiber();
    let df = sol.f.derivative();
    let (one, minus_one) = (int(1), int(-1));
    if !sol.f.eval(&one).is_zero()
        || !sol.f.eval(&minus_one).is_zero()
        || df.eval(&one) != int(-2) * pc.eval(&one)
        || df.eval(&minus_one) != int(2) * pc.eval(&minus_one)
    {
        return Err(SolverError::IdentityViolated("boundary conditions"));
    }
    if sol.f.degree().is_some_and(|d| d > m + 2) {
        return Err(SolverError::IdentityViolated("degree bound m + 2"));
    }
    Ok(())
}

/// `Scal_f = -(f^{-m-1} p_c Θ)'' / (p_c f^{-m-3}) + f^2 S / p_c`, exactly.
pub fn scalar_curvature_profile(
    data: &AdmissibleData,
    w: &WeightParams,
    theta: &RationalFunction,
) -> Result<RationalFunction, SolverError> {
    let m = data.m();
    let f = w.affine();
    if f.is_zero() {
        return Err(SolverError::Validation(vec!["weight a z + b is identically zero".into()]));
    }
    let pc = RationalFunction::from_poly(fiber_polynomial(data));
    let s = RationalFunction::from_poly(curvature_sum(data));
    let h = &(theta * &pc) * &RationalFunction::new(Polynomial::one(), f.pow(m + 1))?;
    let h2 = h.derivative().derivative();
    let f_m3 = RationalFunction::from_poly(f.pow(m + 3));
    let f2 = RationalFunction::from_poly(&f * &f);
    let first = (&h2 * &f_m3).div(&pc)?;
    let second = (&f2 * &s).div(&pc)?;
    Ok(&second - &first)
}
