use serde::Serialize;

use super::{ExtremalSolution, SolverError};
use crate::exactalg::rational::serde_rational_vec;
use crate::exactalg::sturm::rational_root_in;
use crate::exactalg::{int, isolate_roots, positivity_on_closed, IsolatingInterval, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    pub exists: bool,
    /// `F / (1 - z^2)`.
    #[serde(serialize_with = "serialize_poly")]
    pub deflated: Polynomial,
    /// Roots of `F` in the open interval `(-1, 1)`, exact when rational.
    pub interior_roots: Vec<IsolatingInterval>,
    /// `gcd(F, F')` vanishes somewhere in `(-1, 1)`.
    pub double_root_flag: bool,
    /// Rational point with `F(witness) <= 0`; absent when `exists` or when every
    /// offending root is irrational of even multiplicity.
    #[serde(serialize_with = "serialize_opt")]
    pub witness: Option<Rational>,
}

fn serialize_poly<S: serde::Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
    serde_rational_vec::serialize(p.coeffs(), s)
}

fn serialize_opt<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => crate::exactalg::rational::serde_rational::serialize(r, s),
        None => s.serialize_none(),
    }
}

fn endpoint_factor() -> Polynomial {
    Polynomial::from_i64(&[1, 0, -1])
}

/// Positivity verdict for any profile numerator `F` with `F(±1) = 0`. Since the
/// denominator of `Θ` is positive on `[-1, 1]`, the sign of `Θ` is that of `F`.
pub fn existence_for_profile(f: &Polynomial) -> Result<ExistenceReport, SolverError> {
    let deflated = f.divide_exact(&endpoint_factor())?;
    let (lo, hi) = (int(-1), int(1));
    let verdict = positivity_on_closed(&deflated, &lo, &hi)?;
    let interior_roots: Vec<IsolatingInterval> = isolate_roots(&deflated, &lo, &hi)?
        .into_iter()
        .filter(|iv| !(iv.is_exact() && (iv.lo == lo || iv.lo == hi)))
        .map(|iv| match rational_root_in(&deflated, &iv) {
            Some(r) => IsolatingInterval {
                lo: r.clone(),
                hi: r,
                multiplicity: iv.multiplicity,
            },
            None => iv,
        })
        .collect();
    let g = f.gcd(&f.derivative());
    let double_root_flag = !g.is_constant()
        && isolate_roots(&g, &lo, &hi)?
            .iter()
            .any(|iv| !(iv.is_exact() && (iv.lo == lo || iv.lo == hi)));
    let witness = verdict.witness().cloned();
    Ok(ExistenceReport {
        exists: verdict.is_positive(),
        deflated,
        interior_roots,
        double_root_flag,
        witness,
    })
}

pub fn existence_verdict(sol: &ExtremalSolution) -> Result<ExistenceReport, SolverError> {
    let pc = sol.fiber();
    let df = sol.f.derivative();
    let (one, minus_one) = (int(1), int(-1));
    assert!(
        sol.f.eval(&one) == int(0)
            && sol.f.eval(&minus_one) == int(0)
            && df.eval(&one) == int(-2) * pc.eval(&one)
            && df.eval(&minus_one) == int(2) * pc.eval(&minus_one),
        "extremal solution violates its boundary conditions"
    );
    existence_for_profile(&sol.f)
}
