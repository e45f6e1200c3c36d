//! Independent cross-checks: numerical quadrature, alternate derivations of
//! `(A, B)`, linearity and parity properties.

mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use sasaki_extremal::exactalg::rational::to_f64;
use sasaki_extremal::exactalg::{int, moment, rat, Rational};
use sasaki_extremal::futaki::{
    df_indicator, extremal_affine_ibp, find_csc, futaki_with, AffineFn, CscOptions, IbpWeights, DEFAULT_MAX_PREC,
};
use sasaki_extremal::solver::{solve_extremal, solve_weighted};

/// Error scale: `1e-12` of `∫ |z^k (az + b)^{-n}|`, which bounds the value and
/// stays meaningful when odd moments cancel to nearly zero.
const MOMENT_TOL: f64 = 1e-12;

/// Tanh-sinh quadrature on panels no longer than their distance to the pole
/// at `-b/a`, so every panel sees an integrand analytic on a fixed ellipse.
fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut cuts = vec![-1.0, 1.0];
    if a != 0.0 {
        let pole = -b / a;
        let (near, dir) = if pole > 0.0 { (1.0, -1.0) } else { (-1.0, 1.0) };
        let mut x: f64 = near;
        loop {
            x += dir * (x - pole).abs();
            if x.abs() >= 1.0 {
                break;
            }
            cuts.push(x);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|p| quadrature::integrate(&f, p[0], p[1], 1e-16).integral)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn moment_matches_quadrature(
        k in 0usize..=6,
        n in 0usize..=8,
        an in -40i64..=40,
        gap in 1i64..=40,
    ) {
        let a = rat(an, 20);
        let b = &a.abs() + rat(1, 10) + rat(gap, 20);
        let (af, bf) = (to_f64(&a), to_f64(&b));
        let f = |z: f64| z.powi(k as i32) * (af * z + bf).powi(-(n as i32));
        let exact = moment(k, n, &a, &b).unwrap().to_f64();
        let numeric = quad(f, af, bf);
        let scale = quad(|z| f(z).abs(), af, bf);
        prop_assert!(
            (exact - numeric).abs() <= MOMENT_TOL * scale,
            "k={} n={} a={} b={}: {} vs {}", k, n, a, b, exact, numeric
        );
    }
}

#[test]
fn polynomial_ibp_matches_weighted_solver() {
    let mut rng = common::rng(21);
    for i in 0..25 {
        let data = common::data(&mut rng, 4);
        let v = common::positive_poly(&mut rng, 4);
        let w = common::positive_poly(&mut rng, 4);
        let sol = solve_weighted(&data, &v, &w, None).unwrap();
        let (a, b) = extremal_affine_ibp(&data, &IbpWeights::Polynomial { v, w }).unwrap();
        assert_eq!(a.to_rational(), Some(sol.a_ext), "instance {i}");
        assert_eq!(b.to_rational(), Some(sol.b_ext), "instance {i}");
    }
}

#[test]
fn futaki_is_linear_in_the_test_function() {
    let mut rng = common::rng(22);
    for i in 0..15 {
        let (data, w) = common::instance(&mut rng, 4);
        let ell = AffineFn::extremal(&solve_extremal(&data, &w).unwrap());
        let x = AffineFn::new(common::rational(&mut rng, 3, 4), common::rational(&mut rng, 3, 4));
        let y = AffineFn::new(common::rational(&mut rng, 3, 4), common::rational(&mut rng, 3, 4));
        let (al, be) = (common::rational(&mut rng, 2, 5), common::rational(&mut rng, 2, 5));
        let fut = |z: &AffineFn| futaki_with(&data, &w, &ell, z, DEFAULT_MAX_PREC).unwrap().exact;
        let lhs = fut(&x.combine(&al, &y, &be));
        let rhs = &fut(&x).scale(&al) + &fut(&y).scale(&be);
        assert!((&lhs - &rhs).is_zero(), "instance {i}");
    }
}

#[test]
fn df_indicator_has_the_sign_of_the_profile() {
    let mut rng = common::rng(23);
    for i in 0..30 {
        let (data, w) = common::instance(&mut rng, 4);
        let z0 = rat(rng.gen_range(-99..=99), 100);
        let f = solve_extremal(&data, &w).unwrap().f.eval(&z0);
        let df = df_indicator(&data, &w, &z0).unwrap();
        assert_eq!(df.signum(), f.signum(), "instance {i}");
    }
}

#[test]
fn product_data_has_a_ray_at_zero() {
    let mut rng = common::rng(24);
    for i in 0..8 {
        let data = common::product_data(&mut rng, 4);
        let h: Rational = rat(rng.gen_range(1..=99), 100);
        let found = find_csc(&data, &int(1), (&-h.clone(), &h), CscOptions::default()).unwrap();
        assert!(found.contains(&int(0)), "instance {i}: {found:?}");
    }
}
