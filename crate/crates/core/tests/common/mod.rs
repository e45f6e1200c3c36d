//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sasaki_extremal::admissible::{validate, AdmissibleData, BaseFactor, WeightParams};
use sasaki_extremal::exactalg::{int, rat, Polynomial, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n / d` with `n` uniform in `[-span * d, span * d]` and `d` in `1..=max_den`.
pub fn rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    rat(rng.gen_range(-span * d..=span * d), d)
}

/// Validated data with `m <= max_m`, twists in `-2..=2`, `c_j > |p_j|`.
pub fn data(rng: &mut ChaCha8Rng, max_m: usize) -> AdmissibleData {
    let mut left = rng.gen_range(0..max_m) as u32;
    let mut factors = Vec::new();
    while left > 0 {
        let dim = rng.gen_range(1..=left);
        left -= dim;
        let p: i64 = rng.gen_range(-2..=2);
        let d = rng.gen_range(1..=4);
        let c = int(p.abs()) + rat(rng.gen_range(1..=8), d);
        factors.push(BaseFactor::new(dim, rational(rng, 4, 3), p, c));
    }
    AdmissibleData::new(factors)
}

/// Product data: every twist zero.
pub fn product_data(rng: &mut ChaCha8Rng, max_m: usize) -> AdmissibleData {
    let mut d = data(rng, max_m);
    for f in &mut d.factors {
        f.p = 0;
    }
    d
}

/// `b` in `[1, 3]` and `|a| <= b - 1/10`.
pub fn weight(rng: &mut ChaCha8Rng) -> WeightParams {
    let b = int(1) + rat(rng.gen_range(0..=40), 20);
    let reach = &b - rat(1, 10);
    let t = rat(rng.gen_range(-100..=100), 100);
    WeightParams::new(reach * t, b)
}

pub fn instance(rng: &mut ChaCha8Rng, max_m: usize) -> (AdmissibleData, WeightParams) {
    let d = data(rng, max_m);
    let w = weight(rng);
    assert!(validate(&d, &w, false).is_ok());
    (d, w)
}

/// A polynomial positive on `[-1, 1]`: a square plus a positive constant.
pub fn positive_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Polynomial {
    let coeffs: Vec<Rational> = (0..=rng.gen_range(0..=max_deg / 2)).map(|_| rational(rng, 2, 3)).collect();
    let sq = Polynomial::new(coeffs).pow(2);
    &sq + &Polynomial::constant(rat(rng.gen_range(1..=10), 10))
}

/// `lead * prod (z - r)^e` with rational roots inside or outside `[-1, 1]`, optionally lifted by a constant.
pub fn planted(rng: &mut ChaCha8Rng, max_deg: usize) -> Polynomial {
    let mut p = Polynomial::constant(int(rng.gen_range(1..=5) * if rng.gen_bool(0.8) { 1 } else { -1 }));
    let mut deg = 0;
    let target = rng.gen_range(1..=max_deg);
    let inside = if rng.gen_bool(0.5) { 0.8 } else { 0.1 };
    while deg < target {
        let e = if target - deg >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
        let r = if rng.gen_bool(inside) {
            rat(rng.gen_range(-99..=99), 100)
        } else {
            let r = rat(rng.gen_range(101..=300), 100);
            if rng.gen_bool(0.5) {
                r
            } else {
                -r
            }
        };
        p = &p * &Polynomial::new(vec![-r, int(1)]).pow(e);
        deg += e;
    }
    if rng.gen_bool(0.4) {
        p = &p + &Polynomial::constant(rat(rng.gen_range(-5..=5), 100));
    }
    p
}
