//! Exact values of the form `c + sum_i q_i * prod_j ln(r_ij)`.
//!
//! Log arguments are positive rationals different from 1, normalized to be
//! greater than 1 (`ln(1/r) = -ln r` is folded into the coefficient). Terms
//! with the same multiset of arguments are merged, and the empty multiset is
//! the rational constant. A value is symbolically zero when no term survives.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::interval::{ln_enclosure, precision_ladder, Interval};
use super::rational::{format_rational, Rational};
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogPolynomialValue {
    terms: BTreeMap<Vec<Rational>, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
    Undetermined,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Undetermined => "?",
        }
    }

    pub fn mul(self, o: Sign) -> Sign {
        use Sign::*;
        match (self, o) {
            (Zero, _) | (_, Zero) => Zero,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            (a, b) if a == b => Positive,
            _ => Negative,
        }
    }
}

impl LogPolynomialValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(Vec::new(), c);
        v
    }

    /// `ln r`; errors for `r <= 0`.
    pub fn ln(r: &Rational) -> Result<Self, AlgebraError> {
        if !r.is_positive() {
            return Err(AlgebraError::NonPositiveLogArgument);
        }
        if r.is_one() {
            return Ok(Self::zero());
        }
        let mut v = Self::zero();
        if r > &Rational::one() {
            v.add_term(vec![r.clone()], Rational::one());
        } else {
            v.add_term(vec![r.recip()], -Rational::one());
        }
        Ok(v)
    }

    fn add_term(&mut self, key: Vec<Rational>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational part.
    pub fn constant(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Non-constant terms as `(coefficient, sorted log arguments)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &[Rational])> {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(k, c)| (c, k.as_slice()))
    }

    /// The value as a rational, if it has no log terms.
    pub fn as_rational(&self) -> Option<Rational> {
        self.terms().next().is_none().then(|| self.constant())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LogPolynomialValue {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Certified enclosure computed with `prec`-bit outward rounding.
    pub fn enclose(&self, prec: u32) -> Interval {
        let mut logs: BTreeMap<&Rational, Interval> = BTreeMap::new();
        let mut acc = Interval::point(Rational::zero());
        for (key, c) in &self.terms {
            let mut t = Interval::rounded_point(c, prec + 8);
            for arg in key {
                let l = logs
                    .entry(arg)
                    .or_insert_with(|| ln_enclosure(arg, prec + 16))
                    .clone();
                t = t.mul(&l, prec + 8);
            }
            acc = acc.add(&t, prec + 8);
        }
        acc
    }

    /// Sign by symbolic zero test, then interval refinement up to `max_prec` bits.
    pub fn sign(&self, max_prec: u32) -> Sign {
        self.sign_with_enclosure(max_prec).0
    }

    /// Sign together with the tightest enclosure computed on the way.
    pub fn sign_with_enclosure(&self, max_prec: u32) -> (Sign, Interval) {
        if let Some(c) = self.as_rational() {
            let s = if c.is_zero() {
                Sign::Zero
            } else if c.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
            return (s, Interval::point(c));
        }
        let mut last = None;
        for prec in precision_ladder(max_prec) {
            let iv = self.enclose(prec);
            if iv.lo.is_positive() {
                return (Sign::Positive, iv);
            }
            if iv.hi.is_negative() {
                return (Sign::Negative, iv);
            }
            last = Some(iv);
        }
        (Sign::Undetermined, last.unwrap_or_else(|| self.enclose(53)))
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(128).mid_f64()
    }
}

impl Add for &LogPolynomialValue {
    type Output = LogPolynomialValue;
    fn add(self, rhs: &LogPolynomialValue) -> LogPolynomialValue {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Neg for &LogPolynomialValue {
    type Output = LogPolynomialValue;
    fn neg(self) -> LogPolynomialValue {
        LogPolynomialValue {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &LogPolynomialValue {
    type Output = LogPolynomialValue;
    fn sub(self, rhs: &LogPolynomialValue) -> LogPolynomialValue {
        self + &(-rhs)
    }
}

impl Mul for &LogPolynomialValue {
    type Output = LogPolynomialValue;
    fn mul(self, rhs: &LogPolynomialValue) -> LogPolynomialValue {
        let mut out = LogPolynomialValue::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let mut key: Vec<Rational> = k1.iter().chain(k2).cloned().collect();
                key.sort();
                out.add_term(key, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LogPolynomialValue {
            type Output = LogPolynomialValue;
            fn $m(self, rhs: LogPolynomialValue) -> LogPolynomialValue { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for LogPolynomialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // products of more logs first, the rational constant last
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (i, (key, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let logs: Vec<String> = key.iter().map(|r| format!("log({r})")).collect();
            if key.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", logs.join("*"))?;
            } else {
                write!(f, "{mag}*{}", logs.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LogPolynomialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogPolynomialValue({self})")
    }
}

struct TermsSer<'a>(&'a LogPolynomialValue);

impl Serialize for TermsSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.0.terms().collect();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (c, logs) in terms {
            let logs: Vec<String> = logs.iter().map(format_rational).collect();
            seq.serialize_element(&serde_json::json!({
                "coeff": format_rational(c),
                "logs": logs,
            }))?;
        }
        seq.end()
    }
}

impl Serialize for LogPolynomialValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("constant", &format_rational(&self.constant()))?;
        m.serialize_entry("terms", &TermsSer(self))?;
        m.serialize_entry("text", &self.to_string())?;
        m.end()
    }
}
