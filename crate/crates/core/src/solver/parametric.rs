//! The extremal boundary problem in the monomial basis, with the Reeb slope
//! `a` kept as an indeterminate.
//!
//! Unknowns are `F_0..F_{m+2}, A, B`. The equations are the coefficients of
//! `z^0..z^m` in `L[F] + (Az + B) p_c = S f^2` followed by the four boundary
//! conditions. On monomials
//!
//! ```text
//! L[z^j] = a^2 (j-m-1)(j-m-2) z^j + 2ab j(j-m-2) z^{j-1} + b^2 j(j-1) z^{j-2}
//! ```
//!
//! so `L[F]` never exceeds degree `m` and the system is square of size `m + 5`.
//! Every entry is a polynomial in `a` of degree at most 2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::SolverError;
use crate::admissible::{curvature_sum, fiber_polynomial, AdmissibleData, WeightParams};
use crate::exactalg::linsolve::{solve_fraction_free, solve_rational, EliminationFailure};
use crate::exactalg::{int, Polynomial, Rational, RationalFunction};

/// Growth limits for the symbolic elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EliminationCaps {
    pub max_degree: usize,
    pub max_coeff_bits: u64,
}

impl Default for EliminationCaps {
    fn default() -> Self {
        EliminationCaps {
            max_degree: 64,
            max_coeff_bits: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParametricError {
    #[error("symbolic system is singular for every a")]
    Singular,
    #[error("symbolic elimination exceeded its caps (degree {degree}, coefficient bits {bits})")]
    Overflow { degree: usize, bits: u64 },
}

/// `x_i(a) = numerators[i](a) / det(a)` for the unknowns `F_0..F_{m+2}, A, B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicExtremal {
    pub b: Rational,
    pub m: usize,
    pub det: Polynomial,
    pub numerators: Vec<Polynomial>,
}

impl SymbolicExtremal {
    pub fn a_numerator(&self) -> &Polynomial {
        &self.numerators[self.m + 3]
    }

    pub fn b_numerator(&self) -> &Polynomial {
        &self.numerators[self.m + 4]
    }

    /// `A(a)` as a reduced rational function of `a`.
    pub fn a_ext(&self) -> RationalFunction {
        RationalFunction::new(self.a_numerator().clone(), self.det.clone()).expect("det is nonzero")
    }

    pub fn b_ext(&self) -> RationalFunction {
        RationalFunction::new(self.b_numerator().clone(), self.det.clone()).expect("det is nonzero")
    }

    /// `D(a) = A(a) b - B(a) a`, reduced. Zero exactly on the CSC rays.
    pub fn csc_defect(&self) -> RationalFunction {
        let num = &self.a_numerator().scale(&self.b) - &(&Polynomial::z() * self.b_numerator());
        RationalFunction::new(num, self.det.clone()).expect("det is nonzero")
    }

    /// `(F, A, B)` at a concrete slope, or `None` where `det(a) = 0`.
    pub fn specialize(&self, a: &Rational) -> Option<(Polynomial, Rational, Rational)> {
        let d = self.det.eval(a);
        if d.is_zero() {
            return None;
        }
        let x: Vec<Rational> = self.numerators.iter().map(|p| p.eval(a) / &d).collect();
        let f = Polynomial::new(x[..self.m + 3].to_vec());
        Some((f, x[self.m + 3].clone(), x[self.m + 4].clone()))
    }
}

/// The `(m + 5)`-square system over `Q[a]`, rows scaled to integer coefficients.
pub fn monomial_system(data: &AdmissibleData, b: &Rational) -> (Vec<Vec<Polynomial>>, Vec<Polynomial>) {
    let m = data.m();
    let n = m + 5;
    let pc = fiber_polynomial(data);
    let s = curvature_sum(data);
    let a = Polynomial::z();
    let a2 = &a * &a;
    let c = |r: Rational| Polynomial::constant(r);
    let mi = m as i64;

    let mut matrix = vec![vec![Polynomial::zero(); n]; n];
    let mut rhs = vec![Polynomial::zero(); n];
    for j in 0..=m + 2 {
        let ji = j as i64;
        let diag = a2.scale(&int((ji - mi - 1) * (ji - mi - 2)));
        if j <= m {
            matrix[j][j] = &matrix[j][j] + &diag;
        }
        if j >= 1 && j - 1 <= m {
            let sub = a.scale(&(int(2 * ji * (ji - mi - 2)) * b));
            matrix[j - 1][j] = &matrix[j - 1][j] + &sub;
        }
        if j >= 2 && j - 2 <= m {
            let sub2 = c(int(ji * (ji - 1)) * b * b);
            matrix[j - 2][j] = &matrix[j - 2][j] + &sub2;
        }
    }
    for k in 0..=m {
        matrix[k][m + 3] = c(if k == 0 { Rational::zero() } else { pc.coeff(k - 1) });
        matrix[k][m + 4] = c(pc.coeff(k));
        // S (a z + b)^2 at z^k
        let mut r = Polynomial::zero();
        if k >= 2 {
            r = &r + &a2.scale(&s.coeff(k - 2));
        }
        if k >= 1 {
            r = &r + &a.scale(&(int(2) * b * s.coeff(k - 1)));
        }
        r = &r + &c(b * b * s.coeff(k));
        rhs[k] = r;
    }
    let (one, minus_one) = (int(1), int(-1));
    for j in 0..=m + 2 {
        let ji = j as i64;
        let alt = if j % 2 == 0 { int(1) } else { int(-1) };
        matrix[m + 1][j] = c(int(1));
        matrix[m + 2][j] = c(alt.clone());
        matrix[m + 3][j] = c(int(ji));
        matrix[m + 4][j] = c(-alt * int(ji));
    }
    rhs[m + 1] = Polynomial::zero();
    rhs[m + 2] = Polynomial::zero();
    rhs[m + 3] = c(int(-2) * pc.eval(&one));
    rhs[m + 4] = c(int(2) * pc.eval(&minus_one));

    for (row, r) in matrix.iter_mut().zip(rhs.iter_mut()) {
        let lcm = row
            .iter()
            .chain(std::iter::once(&*r))
            .flat_map(|p| p.coeffs().iter())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = Rational::from_integer(lcm);
        for p in row.iter_mut() {
            *p = p.scale(&scale);
        }
        *r = r.scale(&scale);
    }
    (matrix, rhs)
}

/// Fraction-free elimination of [`monomial_system`] over `Q[a]`, aborting as
/// soon as any entry exceeds `caps`.
pub fn solve_symbolic(
    data: &AdmissibleData,
    b: &Rational,
    caps: EliminationCaps,
) -> Result<SymbolicExtremal, ParametricError> {
    let (matrix, rhs) = monomial_system(data, b);
    let mut worst = (0usize, 0u64);
    let mut guard = |m: &[Vec<Polynomial>]| {
        for p in m.iter().flatten() {
            worst.0 = worst.0.max(p.degree().unwrap_or(0));
            worst.1 = worst.1.max(p.max_coeff_bits());
        }
        worst.0 <= caps.max_degree && worst.1 <= caps.max_coeff_bits
    };
    match solve_fraction_free(matrix, rhs, Some(&mut guard)) {
        Ok(sol) => Ok(SymbolicExtremal {
            b: b.clone(),
            m: data.m(),
            det: sol.det,
            numerators: sol.numerators,
        }),
        Err(EliminationFailure::Singular) => Err(ParametricError::Singular),
        Err(EliminationFailure::Aborted) => Err(ParametricError::Overflow {
            degree: worst.0,
            bits: worst.1,
        }),
    }
}

/// `(F, A, B)` from the monomial system at a concrete `(a, b)`. Independent of
/// the eigenbasis construction used by the main solver.
pub fn solve_monomial(
    data: &AdmissibleData,
    w: &WeightParams,
) -> Result<(Polynomial, Rational, Rational), SolverError> {
    let m = data.m();
    let (matrix, rhs) = monomial_system(data, &w.b);
    let at = |p: &Polynomial| p.eval(&w.a);
    let num: Vec<Vec<Rational>> = matrix.iter().map(|row| row.iter().map(at).collect()).collect();
    let r: Vec<Rational> = rhs.iter().map(at).collect();
    let x = solve_rational(&num, &r).ok_or(SolverError::SingularSystem)?;
    Ok((Polynomial::new(x[..m + 3].to_vec()), x[m + 3].clone(), x[m + 4].clone()))
}
