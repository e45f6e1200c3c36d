use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::poly::Polynomial;
use super::rational::Rational;
use super::AlgebraError;

/// Reduced quotient `num / den` with `gcd(num, den) = 1` and `den` monic.
/// The zero function is `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.divide_exact(&g).expect("gcd divides numerator");
        let den = den.divide_exact(&g).expect("gcd divides denominator");
        let lead = den.leading().recip();
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if its denominator is constant.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_constant().then_some(&self.num)
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    #[test]
    fn reduces_common_factors() {
        // (z+2)(1-z^2) / (z+2)
        let f = RationalFunction::new(&p(&[2, 1]) * &p(&[1, 0, -1]), p(&[2, 1])).unwrap();
        assert_eq!(f.den(), &Polynomial::one());
        assert_eq!(f.num(), &p(&[1, 0, -1]));

        let g = RationalFunction::new(p(&[3, 0, 6]), p(&[0, 2])).unwrap();
        assert_eq!(g.den(), &p(&[0, 1]));
        assert_eq!(g.num(), &Polynomial::new(vec![rat(3, 2), int(0), int(3)]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(p(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        // d/dz 1/(1+z) = -1/(1+z)^2
        let f = RationalFunction::new(p(&[1]), p(&[1, 1])).unwrap();
        let d = f.derivative();
        assert_eq!(d.num(), &p(&[-1]));
        assert_eq!(d.den(), &p(&[1, 2, 1]));
        assert_eq!(d.eval(&int(1)), Some(rat(-1, 4)));
        assert_eq!(d.eval(&int(-1)), None);
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let f = RationalFunction::new(p(&[1, 3]), p(&[5, 0, 1])).unwrap();
        assert!((&f - &f).is_zero());
        let one = f.div(&f).unwrap();
        assert_eq!(one, RationalFunction::from_poly(Polynomial::one()));
    }
}
