use num_traits::Zero;

use super::{combine, solve_boundary, SolverError};
use crate::admissible::{curvature_sum, fiber_polynomial, validate, AdmissibleData, WeightParams};
use crate::exactalg::linsolve::solve_rational;
use crate::exactalg::{int, positivity_on_closed, Polynomial, Rational, RationalFunction};

/// Solution of `(v p_c Θ)'' = v S - (Az + B) w p_c` through `G = v p_c Θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSolution {
    pub g: Polynomial,
    pub a_ext: Rational,
    pub b_ext: Rational,
    pub v: Polynomial,
    pub w: Polynomial,
    pub data: AdmissibleData,
    /// `(G'(1) + 2 v(1) p_c(1), G'(-1) - 2 v(-1) p_c(-1))`; zero unless `(A, B)` was forced.
    pub residuals: [Rational; 2],
    pub forced: bool,
}

impl WeightedSolution {
    /// `Θ = G / (v p_c)`.
    pub fn theta(&self) -> RationalFunction {
        RationalFunction::new(self.g.clone(), &self.v * &fiber_polynomial(&self.data))
            .expect("v p_c is nonzero")
    }

    pub fn boundary_ok(&self) -> bool {
        self.residuals.iter().all(Zero::is_zero)
    }
}

fn require_positive(p: &Polynomial) -> Result<(), SolverError> {
    if p.is_zero() || !positivity_on_closed(p, &int(-1), &int(1))?.is_positive() {
        return Err(SolverError::NonPositiveWeight);
    }
    Ok(())
}

/// Solves the `(v, w)`-weighted problem. With `forced = Some((A, B))` only the
/// integration constants are fitted (to `G(±1) = 0`) and the slope mismatch
/// at the endpoints is reported in `residuals` instead of enforced.
pub fn solve_weighted(
    data: &AdmissibleData,
    v: &Polynomial,
    w: &Polynomial,
    forced: Option<(Rational, Rational)>,
) -> Result<WeightedSolution, SolverError> {
    let report = validate(data, &WeightParams::new(int(0), int(1)), false);
    if !report.is_ok() {
        return Err(SolverError::Validation(report.messages()));
    }
    require_positive(v)?;
    if forced.is_none() {
        require_positive(w)?;
    }
    let pc = fiber_polynomial(data);
    let s = curvature_sum(data);
    let z = Polynomial::z();
    let twice = |p: &Polynomial| p.antiderivative().antiderivative();

    let base = twice(&(v * &s));
    let wpc = w * &pc;
    let phi_a = -twice(&(&z * &wpc));
    let phi_b = -twice(&wpc);

    let (one, minus_one) = (int(1), int(-1));
    let vpc_hi = v.eval(&one) * pc.eval(&one);
    let vpc_lo = v.eval(&minus_one) * pc.eval(&minus_one);
    let slope_hi = int(-2) * &vpc_hi;
    let slope_lo = int(2) * &vpc_lo;

    let is_forced = forced.is_some();
    let (g, a_ext, b_ext) = match forced {
        None => {
            let phis = [Polynomial::one(), z.clone(), phi_a, phi_b];
            let u = solve_boundary(&base, &phis, &slope_hi, &slope_lo)?;
            (combine(&base, &phis, &u), u[2].clone(), u[3].clone())
        }
        Some((a_ext, b_ext)) => {
            let base = combine(&base, &[phi_a, phi_b], &[a_ext.clone(), b_ext.clone()]);
            // c0 + c1 z + base vanishes at ±1
            let matrix = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
            let rhs = vec![-base.eval(&one), -base.eval(&minus_one)];
            let c = solve_rational(&matrix, &rhs).ok_or(SolverError::SingularSystem)?;
            let g = combine(&base, &[Polynomial::one(), z.clone()], &c);
            (g, a_ext, b_ext)
        }
    };

    let dg = g.derivative();
    let residuals = [dg.eval(&one) - &slope_hi, dg.eval(&minus_one) - &slope_lo];
    if !is_forced && !residuals.iter().all(Zero::is_zero) {
        return Err(SolverError::IdentityViolated("weighted boundary conditions"));
    }
    let source = &(v * &s) - &(&Polynomial::linear(a_ext.clone(), b_ext.clone()) * &wpc);
    if g.derivative().derivative() != source {
        return Err(SolverError::IdentityViolated("weighted ODE residual"));
    }
    Ok(WeightedSolution {
        g,
        a_ext,
        b_ext,
        v: v.clone(),
        w: w.clone(),
        data: data.clone(),
        residuals,
        forced: is_forced,
    })
}
