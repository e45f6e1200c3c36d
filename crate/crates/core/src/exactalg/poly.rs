//! Dense univariate polynomials over `Rational`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use super::AlgebraError;

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `a z + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + super::rational::to_f64(c);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            v.push(c / int(i as i64 + 1));
        }
        Self::new(v)
    }

    pub fn definite_integral(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, den: &Self) -> (Self, Self) {
        let dd = den.degree().expect("division by the zero polynomial");
        let lead = den.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, c) in den.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient of an exact division; `NotDivisible` when the remainder is nonzero.
    pub fn divide_exact(&self, den: &Self) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let (q, r) = self.div_rem(den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible)
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic. Same distinct roots as `p`, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divide_exact(&g)
            .expect("gcd divides its argument")
            .monic()
    }

    /// Positive rational multiple with coprime integer coefficients. Keeps
    /// remainder sequences from growing while preserving signs.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Self::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &g))
                .collect(),
        )
    }

    /// Integer coefficients of a positive multiple of `self`.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive()
            .coeffs
            .iter()
            .map(|c| c.to_integer())
            .collect()
    }

    /// `p(a z + b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        let lin = Self::linear(a.clone(), b.clone());
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Coefficients `q_s` with `p(z) = sum_s q_s (a z + b)^s`; length `deg p + 1`
    /// (empty for the zero polynomial).
    pub fn shift_basis(&self, a: &Rational, b: &Rational) -> Result<Vec<Rational>, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::ZeroScale);
        }
        // u = a z + b  =>  z = (u - b) / a
        let inv = a.recip();
        let back = self.compose_affine(&inv, &(-(b * &inv)));
        let n = self.coeffs.len();
        let mut q = back.coeffs;
        q.resize(n, Rational::zero());
        Ok(q)
    }

    /// Inverse of [`Polynomial::shift_basis`].
    pub fn from_shift_basis(q: &[Rational], a: &Rational, b: &Rational) -> Self {
        Self::new(q.to_vec()).compose_affine(a, b)
    }

    /// Largest bit length among numerators and denominators.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}z", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}z^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                    (Some(x), Some(y)) => x + y,
                    (Some(x), None) | (None, Some(x)) => x.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial { (&self).$m(rhs) }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(p(&[1, 0, -1]).derivative(), p(&[0, -2]));
        assert_eq!(p(&[5]).derivative(), Polynomial::zero());
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
    }

    #[test]
    fn definite_integral_examples() {
        let (lo, hi) = (int(-1), int(1));
        assert_eq!(p(&[1]).definite_integral(&lo, &hi), int(2));
        assert_eq!(p(&[0, 1]).definite_integral(&lo, &hi), int(0));
        assert_eq!(p(&[0, 0, 1]).definite_integral(&lo, &hi), rat(2, 3));
    }

    #[test]
    fn divide_exact_examples() {
        let one_minus_z2 = p(&[1, 0, -1]);
        assert_eq!(one_minus_z2.divide_exact(&one_minus_z2).unwrap(), p(&[1]));
        assert_eq!(one_minus_z2.divide_exact(&p(&[1, -1])).unwrap(), p(&[1, 1]));
        assert_eq!(
            p(&[1, 0, 1]).divide_exact(&p(&[1, -1])),
            Err(AlgebraError::NotDivisible)
        );
        assert_eq!(
            p(&[1]).divide_exact(&Polynomial::zero()),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn shift_basis_examples() {
        assert_eq!(
            p(&[0, 1]).shift_basis(&int(1), &int(1)).unwrap(),
            vec![int(-1), int(1)]
        );
        assert_eq!(p(&[1]).shift_basis(&int(3), &int(7)).unwrap(), vec![int(1)]);
        // (2z)^2 / 4 = z^2
        let q = p(&[0, 0, 1]).shift_basis(&int(2), &int(0)).unwrap();
        assert_eq!(q, vec![int(0), int(0), rat(1, 4)]);
        assert_eq!(
            Polynomial::from_shift_basis(&q, &int(2), &int(0)),
            p(&[0, 0, 1])
        );
        assert_eq!(
            p(&[0, 1]).shift_basis(&int(0), &int(1)),
            Err(AlgebraError::ZeroScale)
        );
    }

    #[test]
    fn gcd_and_square_free() {
        // (z-1)^2 (z+2)
        let f = &p(&[1, -2, 1]) * &p(&[2, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.square_free_part(), &p(&[-1, 1]) * &p(&[2, 1]));
        assert_eq!(Polynomial::zero().gcd(&p(&[0, 2])), p(&[0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -1]).to_string(), "1 - z^2");
        assert_eq!(
            Polynomial::new(vec![rat(-1, 2), int(3)]).to_string(),
            "-(1/2) + 3*z"
        );
    }

    #[test]
    fn primitive_keeps_sign() {
        let q = Polynomial::new(vec![rat(-1, 2), rat(3, 4)]);
        assert_eq!(q.primitive(), p(&[-2, 3]));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn shift_basis_round_trip(
            coeffs in proptest::collection::vec(-30i64..30, 0..9),
            an in (-12i64..12).prop_filter("a != 0", |a| *a != 0),
            ad in 1i64..7,
            b in -10i64..10,
        ) {
            let p = Polynomial::from_i64(&coeffs);
            let (a, b) = (rat(an, ad), rat(b, 3));
            let q = p.shift_basis(&a, &b).unwrap();
            prop_assert_eq!(q.len(), p.coeffs().len());
            prop_assert_eq!(Polynomial::from_shift_basis(&q, &a, &b), p);
        }
    }
}
