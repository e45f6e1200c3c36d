//! Exact existence tests for weighted extremal metrics on admissible
//! `P^1`-bundles and extremal Sasaki structures on the associated circle
//! bundles.
//!
//! The momentum profile `Θ` of a Calabi-ansatz metric is recovered exactly as
//! a rational function; positivity on `(-1, 1)` is certified with Sturm
//! sequences and Futaki-type quantities are evaluated in closed form.

pub mod admissible;
pub mod cli;
pub mod exactalg;
pub mod futaki;
pub mod solver;
