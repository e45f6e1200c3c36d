//! Admissible fibration data and Reeb weight parameters.
//!
//! A factor `(d_j, Scal_j, p_j, c_j)` describes a CSC base `B_j` of complex
//! dimension `d_j`, twisted by `p_j` with class constant `c_j > |p_j|`. The
//! total space has complex dimension `m = 1 + sum d_j` and fibre volume
//! polynomial `p_c(z) = prod_j (p_j z + c_j)^{d_j}`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::rational::serde_rational;
use crate::exactalg::{int, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFactor {
    pub dim: u32,
    #[serde(with = "serde_rational")]
    pub scal: Rational,
    pub p: i64,
    #[serde(with = "serde_rational")]
    pub c: Rational,
}

impl BaseFactor {
    pub fn new(dim: u32, scal: Rational, p: i64, c: Rational) -> Self {
        BaseFactor { dim, scal, p, c }
    }

    /// `p_j z + c_j`.
    pub fn affine(&self) -> Polynomial {
        Polynomial::linear(int(self.p), self.c.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AdmissibleData {
    pub factors: Vec<BaseFactor>,
}

impl AdmissibleData {
    pub fn new(factors: Vec<BaseFactor>) -> Self {
        AdmissibleData { factors }
    }

    /// Complex dimension of the total space.
    pub fn m(&self) -> usize {
        1 + self.factors.iter().map(|f| f.dim as usize).sum::<usize>()
    }

    /// `true` when every twist vanishes, so the data is symmetric under `z -> -z`.
    pub fn is_product(&self) -> bool {
        self.factors.iter().all(|f| f.p == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightParams {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

impl WeightParams {
    pub fn new(a: Rational, b: Rational) -> Self {
        WeightParams { a, b }
    }

    /// `f(z) = a z + b`.
    pub fn affine(&self) -> Polynomial {
        Polynomial::linear(self.a.clone(), self.b.clone())
    }

    /// Strictly inside the Reeb cone: `b > |a|`.
    pub fn is_interior(&self) -> bool {
        self.b > self.a.abs()
    }

    /// On the boundary ray `b = |a| > 0`, where `f` vanishes at an endpoint.
    pub fn is_boundary_ray(&self) -> bool {
        self.b.is_positive() && self.b == self.a.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `c_j > |p_j|` fails for factor `index`.
    ClassConstant { index: usize },
    /// `d_j >= 1` fails for factor `index`.
    ZeroDimension { index: usize },
    /// `b > |a|` fails and the point is not an admitted boundary point.
    ReebCone,
}

impl Violation {
    pub fn message(&self) -> String {
        match self {
            Violation::ClassConstant { index } => {
                format!("factor {index}: constraint c_j > |p_j| violated")
            }
            Violation::ZeroDimension { index } => format!("factor {index}: dim must be >= 1"),
            Violation::ReebCone => {
                "weight: constraint b > |a| violated (extended mode admits only b = |a| > 0)"
                    .to_string()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValidationWarning {
    /// The weight sits on the boundary ray `b = |a|`; `f` vanishes at an endpoint.
    ExtendedDomain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(Violation::message).collect()
    }
}

pub fn validate(data: &AdmissibleData, w: &WeightParams, extended: bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (index, f) in data.factors.iter().enumerate() {
        if f.dim == 0 {
            report.violations.push(Violation::ZeroDimension { index });
        }
        if f.c <= int(f.p.abs()) {
            report.violations.push(Violation::ClassConstant { index });
        }
    }
    if !w.is_interior() {
        if extended && w.is_boundary_ray() {
            report.warnings.push(ValidationWarning::ExtendedDomain);
        } else {
            report.violations.push(Violation::ReebCone);
        }
    }
    report
}

/// `p_c(z) = prod_j (p_j z + c_j)^{d_j}`.
pub fn fiber_polynomial(data: &AdmissibleData) -> Polynomial {
    data.factors
        .iter()
        .fold(Polynomial::one(), |acc, f| &acc * &f.affine().pow(f.dim as usize))
}

/// `S(z) = p_c(z) * sum_j Scal_j / (p_j z + c_j)`, always a polynomial.
pub fn curvature_sum(data: &AdmissibleData) -> Polynomial {
    let mut total = Polynomial::zero();
    for (j, f) in data.factors.iter().enumerate() {
        if f.scal.is_zero() {
            continue;
        }
        // p_c / (p_j z + c_j) = (p_j z + c_j)^{d_j - 1} * prod_{i != j} (...)^{d_i}
        let rest = data
            .factors
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .fold(f.affine().pow((f.dim as usize).saturating_sub(1)), |acc, (_, g)| {
                &acc * &g.affine().pow(g.dim as usize)
            });
        total = &total + &rest.scale(&f.scal);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, RationalFunction};
    use proptest::prelude::*;

    fn factor(dim: u32, scal: i64, p: i64, c: Rational) -> BaseFactor {
        BaseFactor::new(dim, int(scal), p, c)
    }

    #[test]
    fn validate_examples() {
        let d = AdmissibleData::new(vec![factor(1, 0, 1, int(2))]);
        assert!(validate(&d, &WeightParams::new(rat(1, 2), int(1)), false).is_ok());

        let bad = AdmissibleData::new(vec![factor(1, 0, 1, int(1))]);
        let r = validate(&bad, &WeightParams::new(int(0), int(1)), false);
        assert_eq!(r.violations, vec![Violation::ClassConstant { index: 0 }]);
        assert!(r.messages()[0].contains("c_j > |p_j|"));

        let edge = WeightParams::new(int(1), int(1));
        let r = validate(&d, &edge, true);
        assert!(r.is_ok());
        assert_eq!(r.warnings, vec![ValidationWarning::ExtendedDomain]);
        assert_eq!(validate(&d, &edge, false).violations, vec![Violation::ReebCone]);
        // extended mode does not admit points outside the closed cone
        assert!(!validate(&d, &WeightParams::new(int(2), int(1)), true).is_ok());
        assert!(!validate(&d, &WeightParams::new(int(0), int(0)), true).is_ok());
    }

    #[test]
    fn fiber_polynomial_examples() {
        assert_eq!(fiber_polynomial(&AdmissibleData::default()), Polynomial::one());
        let one = AdmissibleData::new(vec![factor(1, 0, 1, int(2))]);
        assert_eq!(fiber_polynomial(&one), Polynomial::from_i64(&[2, 1]));
        let two = AdmissibleData::new(vec![factor(2, 0, 1, int(3)), factor(1, 0, -1, int(2))]);
        // (z+3)^2 (2-z) = 18 + 3z - 4z^2 - z^3
        let pc = fiber_polynomial(&two);
        assert_eq!(pc, Polynomial::from_i64(&[18, 3, -4, -1]));
        assert_eq!(pc.degree(), Some(two.m() - 1));
    }

    #[test]
    fn curvature_sum_examples() {
        assert!(curvature_sum(&AdmissibleData::default()).is_zero());
        let flat = AdmissibleData::new(vec![factor(1, 2, 0, int(1))]);
        assert_eq!(curvature_sum(&flat), Polynomial::from_i64(&[2]));
        let sq = AdmissibleData::new(vec![factor(2, 4, 1, int(2))]);
        assert_eq!(curvature_sum(&sq), Polynomial::from_i64(&[8, 4]));
    }

    fn arb_data() -> impl Strategy<Value = AdmissibleData> {
        proptest::collection::vec((1u32..3, -5i64..6, -3i64..4, 1i64..5, 1i64..4), 0..3).prop_map(
            |fs| {
                AdmissibleData::new(
                    fs.into_iter()
                        .map(|(d, s, p, cn, cd)| {
                            BaseFactor::new(d, int(s), p, int(p.abs()) + rat(cn, cd))
                        })
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn fiber_polynomial_positive_at_ends(data in arb_data()) {
            let pc = fiber_polynomial(&data);
            prop_assert!(pc.eval(&int(1)).is_positive());
            prop_assert!(pc.eval(&int(-1)).is_positive());
            let twisted: usize = data.factors.iter().filter(|f| f.p != 0).map(|f| f.dim as usize).sum();
            prop_assert_eq!(pc.degree(), Some(twisted));
            prop_assert!(twisted < data.m());
            prop_assert_eq!(twisted == data.m() - 1, data.factors.iter().all(|f| f.p != 0));
        }

        #[test]
        fn curvature_sum_matches_rational_identity(data in arb_data()) {
            let pc = fiber_polynomial(&data);
            let mut sum = RationalFunction::zero();
            for f in &data.factors {
                let term = RationalFunction::new(Polynomial::constant(f.scal.clone()), f.affine()).unwrap();
                sum = &sum + &term;
            }
            let want = &sum * &RationalFunction::from_poly(pc);
            prop_assert_eq!(RationalFunction::from_poly(curvature_sum(&data)), want);
            if data.m() >= 2 {
                prop_assert!(curvature_sum(&data).degree().is_none_or(|d| d <= data.m() - 2));
            }
        }
    }
}
