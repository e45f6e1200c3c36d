use num_traits::Zero;

use super::{SolverError, WeightedSolution};
use crate::admissible::{curvature_sum, fiber_polynomial};
use crate::exactalg::{int, Polynomial, Rational, RationalFunction};

/// `(Θ_t, w_t)` with `Θ_t = Θ - t (1 - z^2)^2 (Az + B)^3` and `w_t = w + t w~`,
/// `w~ = (v p_c (1 - z^2)^2 (Az + B)^3)'' / ((Az + B) p_c)`.
///
/// The pair solves the weighted equation with the same `(A, B)`; this and the
/// unchanged boundary values of `Θ_t` are checked before returning.
pub fn perturbation_pair(
    sol: &WeightedSolution,
    t: &Rational,
) -> Result<(RationalFunction, RationalFunction), SolverError> {
    if sol.a_ext.is_zero() && sol.b_ext.is_zero() {
        return Err(SolverError::DegenerateExtremalAffine);
    }
    let ell = Polynomial::linear(sol.a_ext.clone(), sol.b_ext.clone());
    let pc = fiber_polynomial(&sol.data);
    let bump = &Polynomial::from_i64(&[1, 0, -1]).pow(2) * &ell.pow(3);

    let theta = sol.theta();
    let theta_t = &theta - &RationalFunction::from_poly(bump.scale(t));
    let raised = (&(&sol.v * &pc) * &bump).derivative().derivative();
    let w_tilde = RationalFunction::new(raised, &ell * &pc)?;
    let w_t = &RationalFunction::from_poly(sol.w.clone()) + &w_tilde.scale(t);

    let vpc = RationalFunction::from_poly(&sol.v * &pc);
    let lhs = (&vpc * &theta_t).derivative().derivative();
    let rhs = &RationalFunction::from_poly(&sol.v * &curvature_sum(&sol.data))
        - &(&RationalFunction::from_poly(&ell * &pc) * &w_t);
    if !(&lhs - &rhs).is_zero() {
        return Err(SolverError::IdentityViolated("perturbed weighted equation"));
    }
    let (d0, dt) = (theta.derivative(), theta_t.derivative());
    for x in [int(1), int(-1)] {
        if theta_t.eval(&x) != theta.eval(&x) || dt.eval(&x) != d0.eval(&x) {
            return Err(SolverError::IdentityViolated("perturbed boundary values"));
        }
    }
    Ok((theta_t, w_t))
}
