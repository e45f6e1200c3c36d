//! Fraction-free (Bareiss) Gauss-Jordan elimination over exact rings.
//!
//! Every division performed during elimination is exact, so over the
//! integers or over `Q[a]` no fractions appear until the final quotients
//! `x_i = numerator_i / det`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational::Rational;

pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Self {
        let (q, r) = self.div_rem(o);
        debug_assert!(Zero::is_zero(&r), "inexact Bareiss division");
        q
    }
}

impl ExactRing for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Self {
        self.divide_exact(o).expect("inexact Bareiss division")
    }
}

/// Solution of `M x = r` as `x_i = numerators[i] / det`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionFree<T> {
    pub det: T,
    pub numerators: Vec<T>,
}

/// Optional hook run after each pivot step; returning `false` aborts.
pub type StepGuard<'a, T> = &'a mut dyn FnMut(&[Vec<T>]) -> bool;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminationFailure {
    Singular,
    Aborted,
}

/// Fraction-free Gauss-Jordan on the augmented matrix `[M | r]`. `det` is the
/// determinant of `M` up to the sign of the row permutation used.
pub fn solve_fraction_free<T: ExactRing>(
    matrix: Vec<Vec<T>>,
    rhs: Vec<T>,
    mut guard: Option<StepGuard<'_, T>>,
) -> Result<FractionFree<T>, EliminationFailure> {
    let n = matrix.len();
    assert_eq!(rhs.len(), n);
    let mut m: Vec<Vec<T>> = matrix
        .into_iter()
        .zip(rhs)
        .map(|(mut row, r)| {
            assert_eq!(row.len(), n, "matrix must be square");
            row.push(r);
            row
        })
        .collect();
    let mut prev = T::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or(EliminationFailure::Singular)?;
        m.swap(k, pivot);
        let pk = m[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..=n {
                if j == k {
                    continue;
                }
                let v = pk.mul(&m[i][j]).sub(&f.mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = T::zero();
        }
        prev = pk;
        if let Some(g) = guard.as_mut() {
            if !g(&m) {
                return Err(EliminationFailure::Aborted);
            }
        }
    }
    Ok(FractionFree {
        det: prev,
        numerators: m.into_iter().map(|mut row| row.pop().expect("augmented")).collect(),
    })
}

/// Solves a rational square system exactly. Rows are scaled to integers
/// first so the elimination itself is fraction-free over `Z`.
pub fn solve_rational(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let mut im = Vec::with_capacity(matrix.len());
    let mut ir = Vec::with_capacity(rhs.len());
    for (row, r) in matrix.iter().zip(rhs) {
        let lcm = row
            .iter()
            .chain(std::iter::once(r))
            .fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
        let scale = Rational::from_integer(lcm);
        im.push(
            row.iter()
                .map(|c| (c * &scale).to_integer())
                .collect::<Vec<_>>(),
        );
        ir.push((r * &scale).to_integer());
    }
    let sol = solve_fraction_free(im, ir, None).ok()?;
    Some(
        sol.numerators
            .into_iter()
            .map(|x| Rational::new(x, sol.det.clone()))
            .collect(),
    )
}
