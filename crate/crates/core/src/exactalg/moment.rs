use num_traits::{One, Signed, Zero};

use super::logpoly::LogPolynomialValue;
use super::rational::{int, Rational};
use super::AlgebraError;

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int(i as i64 + 1);
    }
    acc
}

fn rpow(x: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Exact `∫_{-1}^{1} z^k (a z + b)^{-n} dz`.
///
/// With `u = a z + b` the integrand expands binomially into powers `u^(j-n)`;
/// only the power `u^-1` produces a logarithm, `ln((b + a) / (b - a))`.
pub fn moment(k: usize, n: usize, a: &Rational, b: &Rational) -> Result<LogPolynomialValue, AlgebraError> {
    let lo = b - a;
    let hi = b + a;
    if n > 0 && (!lo.is_positive() || !hi.is_positive()) && (!lo.is_negative() || !hi.is_negative()) {
        return Err(AlgebraError::PoleOnInterval);
    }
    if a.is_zero() {
        let plain = if k.is_multiple_of(2) {
            Rational::new(2.into(), (k as i64 + 1).into())
        } else {
            Rational::zero()
        };
        return Ok(LogPolynomialValue::rational(plain * rpow(b, -(n as i64))));
    }
    // ∫ ((u - b)/a)^k u^-n du / a  over u in [b - a, b + a]
    let mut out = LogPolynomialValue::zero();
    let minus_b = -b;
    for j in 0..=k {
        let coeff = binomial(k, j) * rpow(&minus_b, (k - j) as i64);
        if coeff.is_zero() {
            continue;
        }
        let e = j as i64 - n as i64;
        let part = if e == -1 {
            LogPolynomialValue::ln(&(&hi / &lo))?
        } else {
            LogPolynomialValue::rational((rpow(&hi, e + 1) - rpow(&lo, e + 1)) / int(e + 1))
        };
        out = &out + &part.scale(&coeff);
    }
    Ok(out.scale(&rpow(a, -(k as i64) - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn moment_examples() {
        let ln3 = LogPolynomialValue::ln(&int(3)).unwrap();
        assert_eq!(moment(0, 1, &int(1), &int(2)).unwrap(), ln3);
        let want = &ln3 - &LogPolynomialValue::rational(rat(4, 3));
        assert_eq!(moment(1, 2, &int(1), &int(2)).unwrap(), want);
        assert_eq!(
            moment(2, 0, &int(0), &int(1)).unwrap(),
            LogPolynomialValue::rational(rat(2, 3))
        );
    }

    #[test]
    fn negative_slope_uses_same_log() {
        // z -> -z symmetry: moment(k, n, -a, b) = (-1)^k moment(k, n, a, b)
        for k in 0..5 {
            let p = moment(k, 3, &rat(1, 2), &int(1)).unwrap();
            let q = moment(k, 3, &rat(-1, 2), &int(1)).unwrap();
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(q, p.scale(&sign));
        }
    }

    #[test]
    fn pole_rejected() {
        assert_eq!(moment(0, 1, &int(1), &int(1)), Err(AlgebraError::PoleOnInterval));
        assert_eq!(moment(0, 2, &int(2), &int(1)), Err(AlgebraError::PoleOnInterval));
        // no negative power means no pole
        assert_eq!(
            moment(1, 0, &int(1), &int(1)).unwrap(),
            LogPolynomialValue::rational(int(0))
        );
    }

    #[test]
    fn constant_weight_is_rational() {
        assert_eq!(
            moment(4, 3, &int(0), &int(2)).unwrap().as_rational(),
            Some(rat(2, 5) / int(8))
        );
    }
}
