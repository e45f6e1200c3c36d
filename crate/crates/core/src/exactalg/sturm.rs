//! Real-root counting, isolation and positivity certificates on intervals.
//!
//! Everything is decided from Sturm sequences of the square-free part, so
//! the verdicts are exact. Multiplicities are recovered from the gcd chain
//! `p, gcd(p, p'), ...` rather than from the sequence itself.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly::Polynomial;
use super::rational::{int, serde_rational, Rational};
use super::AlgebraError;

pub struct SturmSequence {
    seq: Vec<Polynomial>,
}

impl SturmSequence {
    /// Builds the sequence of `p`, which should already be square-free.
    pub fn new(p: &Polynomial) -> Self {
        let mut seq = vec![p.primitive()];
        let d = p.derivative().primitive();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps the sign pattern intact
            seq.push((-r).primitive());
        }
        SturmSequence { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for q in &self.seq {
            let v = q.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`. The square-free
/// reduction happens internally.
pub fn sturm_count(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<usize, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(AlgebraError::EmptyInterval);
    }
    Ok(SturmSequence::new(&p.square_free_part()).count(lo, hi))
}

/// A root of a polynomial located either exactly (`lo == hi`) or inside the
/// open interval `(lo, hi)`, which then contains no other root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolatingInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Isolates every distinct real root of `p` in the closed interval `[lo, hi]`,
/// in increasing order.
pub fn isolate_roots(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<IsolatingInterval>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(AlgebraError::EmptyInterval);
    }
    let sq = p.square_free_part();
    let mut out = Vec::new();
    if sq.eval(lo).is_zero() {
        out.push((lo.clone(), lo.clone()));
    }
    if lo < hi {
        let sturm = SturmSequence::new(&sq);
        let n = sturm.count(lo, hi);
        bisect(&sq, &sturm, lo.clone(), hi.clone(), n, &mut out);
    }
    Ok(out
        .into_iter()
        .map(|(l, h)| {
            let multiplicity = multiplicity_in(p, &l, &h);
            IsolatingInterval {
                lo: l,
                hi: h,
                multiplicity,
            }
        })
        .collect())
}

fn bisect(
    sq: &Polynomial,
    sturm: &SturmSequence,
    lo: Rational,
    hi: Rational,
    count: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        if sq.eval(&hi).is_zero() {
            out.push((hi.clone(), hi));
        } else {
            out.push((lo, hi));
        }
        return;
    }
    let mid = (&lo + &hi) / int(2);
    let left = sturm.count(&lo, &mid);
    bisect(sq, sturm, lo, mid.clone(), left, out);
    bisect(sq, sturm, mid, hi, count - left, out);
}

/// Multiplicity in `p` of the unique root located by `[lo, hi]` (exact) or `(lo, hi)`.
fn multiplicity_in(p: &Polynomial, lo: &Rational, hi: &Rational) -> usize {
    let has_root = |q: &Polynomial| {
        if q.is_constant() {
            return false;
        }
        if lo == hi {
            q.eval(lo).is_zero()
        } else {
            let sq = q.square_free_part();
            let s = SturmSequence::new(&sq);
            s.count(lo, hi) - usize::from(sq.eval(hi).is_zero()) > 0
        }
    };
    let mut mult = 1;
    let mut g = p.gcd(&p.derivative());
    while has_root(&g) {
        mult += 1;
        g = g.gcd(&g.derivative());
    }
    mult
}

/// Shrinks an open isolating interval of a root of `p` until its width is at
/// most `width`, or until the root is hit exactly.
pub fn refine(p: &Polynomial, iv: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let sq = p.square_free_part();
    let sturm = SturmSequence::new(&sq);
    let mut cur = iv.clone();
    while !cur.is_exact() && &cur.width() > width {
        let mid = (&cur.lo + &cur.hi) / int(2);
        if sq.eval(&mid).is_zero() {
            cur.lo = mid.clone();
            cur.hi = mid;
        } else if sturm.count(&cur.lo, &mid) == 1 {
            cur.hi = mid;
        } else {
            cur.lo = mid;
        }
    }
    cur
}

/// The root inside `iv` if it is rational.
///
/// A rational root `u/v` of a primitive integer polynomial has `v` dividing the
/// leading coefficient `l`, so once the interval is narrower than `1/|l|` the
/// only candidate is `k/l` for the single integer `k` in the scaled interval.
pub fn rational_root_in(p: &Polynomial, iv: &IsolatingInterval) -> Option<Rational> {
    if iv.is_exact() {
        return Some(iv.lo.clone());
    }
    let sq = p.square_free_part().primitive();
    let lc: BigInt = sq.leading().to_integer().abs();
    let target = Rational::new(BigInt::from(1), lc.clone());
    let iv = refine(&sq, iv, &target);
    if iv.is_exact() {
        return Some(iv.lo);
    }
    let lcr = Rational::from_integer(lc.clone());
    let k_lo = (&iv.lo * &lcr).ceil().to_integer();
    let k_hi = (&iv.hi * &lcr).floor().to_integer();
    let mut k = k_lo;
    while k <= k_hi {
        let cand = Rational::new(k.clone(), lc.clone());
        if cand > iv.lo && cand < iv.hi && sq.eval(&cand).is_zero() {
            return Some(cand);
        }
        k.inc();
    }
    None
}

/// Outcome of a closed-interval positivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    /// `witness`, when present, is a rational point with `p(witness) <= 0`.
    /// It is absent only when every root in the interval is irrational of even
    /// multiplicity, where no rational point attains a nonpositive value.
    NotPositive { witness: Option<Rational> },
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive)
    }

    pub fn witness(&self) -> Option<&Rational> {
        match self {
            Positivity::Positive => None,
            Positivity::NotPositive { witness } => witness.as_ref(),
        }
    }
}

/// Decides `p(z) > 0` for all `z` in `[lo, hi]`, returning a nonpositive
/// witness when it fails.
pub fn positivity_on_closed(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
) -> Result<Positivity, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(AlgebraError::EmptyInterval);
    }
    for end in [lo, hi] {
        if !p.eval(end).is_positive() {
            return Ok(Positivity::NotPositive {
                witness: Some(end.clone()),
            });
        }
    }
    if lo == hi {
        return Ok(Positivity::Positive);
    }
    let sq = p.square_free_part();
    if SturmSequence::new(&sq).count(lo, hi) == 0 {
        let mid = (lo + hi) / int(2);
        debug_assert!(p.eval(&mid).is_positive());
        return Ok(Positivity::Positive);
    }
    let roots = isolate_roots(p, lo, hi)?;
    Ok(Positivity::NotPositive {
        witness: find_witness(p, &roots),
    })
}

pub fn is_positive_on_closed(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
) -> Result<bool, AlgebraError> {
    positivity_on_closed(p, lo, hi).map(|v| v.is_positive())
}

fn find_witness(p: &Polynomial, roots: &[IsolatingInterval]) -> Option<Rational> {
    // odd multiplicity roots force a sign change, so a strictly negative
    // rational point sits next to them
    for iv in roots.iter().filter(|iv| iv.multiplicity.is_odd()) {
        if iv.is_exact() {
            return Some(iv.lo.clone());
        }
        for x in [&iv.lo, &iv.hi] {
            if !p.eval(x).is_positive() {
                return Some(x.clone());
            }
        }
        // both ends positive cannot happen for a sign-changing isolated root,
        // but fall back to the root itself if it is rational
        if let Some(r) = rational_root_in(p, iv) {
            return Some(r);
        }
    }
    roots.iter().find_map(|iv| rational_root_in(p, iv))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    fn planted() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
        // distinct roots inside (-1, 1) and outside [-1, 1]
        let inside = proptest::collection::btree_set(-99i64..100, 0..6);
        let outside = proptest::collection::btree_set(101i64..400, 0..3);
        (inside, outside).prop_map(|(i, o)| {
            let ins: Vec<Rational> = i.into_iter().map(|k| rat(k, 100)).collect();
            let out: Vec<Rational> = o
                .into_iter()
                .enumerate()
                .map(|(j, k)| if j % 2 == 0 { rat(k, 100) } else { rat(-k, 100) })
                .collect();
            (ins, out)
        })
    }

    fn from_roots<'a>(roots: impl Iterator<Item = &'a Rational>) -> Polynomial {
        roots.fold(Polynomial::one(), |acc, r| &acc * &Polynomial::new(vec![-r.clone(), int(1)]))
    }

    proptest! {
        #[test]
        fn planted_root_count((ins, out) in planted(), lead in 1i64..5) {
            let p = from_roots(ins.iter().chain(&out)).scale(&int(lead));
            prop_assume!(!p.is_constant());
            prop_assert_eq!(sturm_count(&p, &int(-1), &int(1)).unwrap(), ins.len());
        }

        #[test]
        fn positivity_is_sound((ins, out) in planted(), lift in 0i64..4, sq in any::<bool>()) {
            // optionally square the roots and add a constant so both verdicts occur
            let base = from_roots(ins.iter().chain(&out));
            let p = &(if sq { base.pow(2) } else { base }) + &Polynomial::constant(rat(lift, 50));
            prop_assume!(!p.is_zero());
            match positivity_on_closed(&p, &int(-1), &int(1)).unwrap() {
                Positivity::Positive => {
                    for k in 0..=1000 {
                        prop_assert!(p.eval(&rat(2 * k - 1000, 1000)).is_positive());
                    }
                }
                Positivity::NotPositive { witness } => {
                    let w = witness.expect("planted roots are rational");
                    prop_assert!(w >= int(-1) && w <= int(1));
                    prop_assert!(!p.eval(&w).is_positive());
                }
            }
        }
    }
}
