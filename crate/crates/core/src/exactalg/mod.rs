//! Exact scalar and univariate algebra over the momentum variable `z`.

pub mod interval;
pub mod linsolve;
pub mod logpoly;
pub mod moment;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod sturm;

pub use logpoly::{LogPolynomialValue, Sign};
pub use moment::moment;
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use sturm::{
    is_positive_on_closed, isolate_roots, positivity_on_closed, sturm_count, IsolatingInterval,
    Positivity,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial division leaves a nonzero remainder")]
    NotDivisible,
    #[error("affine basis requires a nonzero scale")]
    ZeroScale,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("interval is empty or degenerate")]
    EmptyInterval,
    #[error("a z + b vanishes on [-1, 1]")]
    PoleOnInterval,
    #[error("logarithm of a nonpositive rational")]
    NonPositiveLogArgument,
}
