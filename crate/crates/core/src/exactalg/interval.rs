//! Outward-rounded rational intervals and certified logarithm enclosures.
//!
//! Bounds are dyadic rationals carrying a fixed number of significant bits,
//! so sizes stay bounded while every operation keeps the true value inside.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Rounds `r` to a dyadic rational with about `prec` significant bits,
/// towards `+inf` when `up` and towards `-inf` otherwise.
pub fn round_dyadic(r: &Rational, prec: u32, up: bool) -> Rational {
    if r.is_zero() || r.denom().is_one() && r.numer().bits() <= prec as u64 {
        return r.clone();
    }
    let mag = r.numer().bits() as i64 - r.denom().bits() as i64;
    let shift = prec as i64 - mag;
    let (num, den) = if shift >= 0 {
        (r.numer() << shift as u64, r.denom().clone())
    } else {
        (r.numer().clone(), r.denom() << (-shift) as u64)
    };
    let q = if up {
        -((-num).div_floor(&den))
    } else {
        num.div_floor(&den)
    };
    if shift >= 0 {
        Rational::new(q, pow2(shift as u64))
    } else {
        Rational::from_integer(q << (-shift) as u64)
    }
}

impl Interval {
    pub fn point(r: Rational) -> Self {
        Interval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn rounded_point(r: &Rational, prec: u32) -> Self {
        Interval {
            lo: round_dyadic(r, prec, false),
            hi: round_dyadic(r, prec, true),
        }
    }

    fn rounded(lo: Rational, hi: Rational, prec: u32) -> Self {
        Interval {
            lo: round_dyadic(&lo, prec, false),
            hi: round_dyadic(&hi, prec, true),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Self::rounded(&self.lo + &o.lo, &self.hi + &o.hi, prec)
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Self::rounded(lo, hi, prec)
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        Some(self.mul(&inv, prec))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    /// Half-width, rounded up to the next representable double.
    pub fn radius_f64(&self) -> f64 {
        let r = to_f64(&((&self.hi - &self.lo) / int(2)));
        if r == 0.0 {
            0.0
        } else {
            r * (1.0 + f64::EPSILON)
        }
    }
}

/// Encloses `atanh(x) = sum x^(2j+1)/(2j+1)` for `0 <= x <= 1/3`.
fn atanh_small(x: &Rational, prec: u32) -> Interval {
    debug_assert!(!x.is_negative() && x <= &Rational::new(1.into(), 3.into()));
    let work = prec + 24;
    if x.is_zero() {
        return Interval::point(Rational::zero());
    }
    let eps = Rational::new(BigInt::one(), pow2(work as u64 + 4));
    let x2 = Interval::rounded_point(&(x * x), work);
    let mut power = Interval::rounded_point(x, work);
    let mut sum = Interval::point(Rational::zero());
    let mut j: i64 = 0;
    loop {
        let denom = Interval::point(int(2 * j + 1));
        let term = power.div(&denom, work).expect("positive odd denominator");
        sum = sum.add(&term, work);
        power = power.mul(&x2, work);
        j += 1;
        if power.hi < eps {
            break;
        }
    }
    // remaining terms are bounded by the geometric tail  power / (2j+1) / (1 - x^2)
    let tail = &power.hi / int(2 * j + 1) * Rational::new(9.into(), 8.into());
    Interval {
        lo: sum.lo,
        hi: round_dyadic(&(&sum.hi + tail), work, true),
    }
}

fn ln2(prec: u32) -> Interval {
    let t = atanh_small(&Rational::new(1.into(), 3.into()), prec);
    Interval {
        lo: &t.lo * int(2),
        hi: &t.hi * int(2),
    }
}

/// Certified enclosure of `ln r` for a positive rational `r`.
pub fn ln_enclosure(r: &Rational, prec: u32) -> Interval {
    assert!(r.is_positive(), "logarithm of a nonpositive rational");
    if r.is_one() {
        return Interval::point(Rational::zero());
    }
    if r < &Rational::one() {
        return ln_enclosure(&r.recip(), prec).neg();
    }
    // r = 2^k y with 1 <= y < 2
    let mut k = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scale = |k: i64| {
        if k >= 0 {
            Rational::from_integer(pow2(k as u64))
        } else {
            Rational::new(BigInt::one(), pow2((-k) as u64))
        }
    };
    let mut y = r / scale(k);
    while y < Rational::one() {
        k -= 1;
        y = r / scale(k);
    }
    while y >= int(2) {
        k += 1;
        y = r / scale(k);
    }
    let work = prec + 16;
    let x = (&y - int(1)) / (&y + int(1));
    let t = atanh_small(&x, work);
    let ln_y = Interval {
        lo: &t.lo * int(2),
        hi: &t.hi * int(2),
    };
    let ln2 = ln2(work + (k.unsigned_abs().max(1).ilog2() + 1));
    let kl = ln2.mul(&Interval::point(int(k)), work);
    kl.add(&ln_y, prec)
}

/// Precision ladder used for certified sign extraction: 53, 128, 256, ...
pub fn precision_ladder(max_prec: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(53u32.min(max_prec.max(1)));
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur >= max_prec {
            None
        } else if cur < 128 {
            Some(128.min(max_prec))
        } else {
            Some(cur.saturating_mul(2).min(max_prec))
        };
        Some(cur)
    })
}

pub fn interval_to_f64_pair(iv: &Interval) -> (f64, f64) {
    (
        iv.lo.to_f64().unwrap_or(f64::NEG_INFINITY),
        iv.hi.to_f64().unwrap_or(f64::INFINITY),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn rounding_is_outward() {
        let r = rat(1, 3);
        let lo = round_dyadic(&r, 20, false);
        let hi = round_dyadic(&r, 20, true);
        assert!(lo < r && r < hi);
        assert!(&hi - &lo <= rat(1, 1 << 20));
        assert_eq!(round_dyadic(&int(5), 20, true), int(5));
        let big = rat(1_000_000_007, 3);
        assert!(round_dyadic(&big, 8, false) <= big);
        assert!(round_dyadic(&big, 8, true) >= big);
        assert!(round_dyadic(&-big.clone(), 8, true) >= -big);
    }

    #[test]
    fn ln_matches_std() {
        for (n, d) in [(3, 1), (2, 1), (1, 7), (1000, 3), (17, 16), (5, 4)] {
            let r = rat(n, d);
            let iv = ln_enclosure(&r, 64);
            let want = (n as f64 / d as f64).ln();
            assert!(iv.lo <= iv.hi);
            assert!((iv.mid_f64() - want).abs() < 1e-15 * want.abs().max(1.0), "{n}/{d}");
            assert!(iv.radius_f64() < 1e-17);
        }
    }

    #[test]
    fn ln_tightens_with_precision() {
        let iv = ln_enclosure(&int(3), 1024);
        let w = &iv.hi - &iv.lo;
        assert!(w.is_positive());
        assert!(w < Rational::new(BigInt::one(), pow2(1000)));
        let coarse = ln_enclosure(&int(3), 53);
        assert!(coarse.lo <= iv.lo && iv.hi <= coarse.hi);
    }

    #[test]
    fn ladder() {
        let v: Vec<u32> = precision_ladder(4096).collect();
        assert_eq!(v, vec![53, 128, 256, 512, 1024, 2048, 4096]);
        let v: Vec<u32> = precision_ladder(100).collect();
        assert_eq!(v, vec![53, 100]);
    }
}
