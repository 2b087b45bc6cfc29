//! Exact scalars and dense linear algebra over the rationals.
//!
//! Everything on the classification path runs in [`Rational`]. The
//! [`Scalar`] type adds an `f64` escape hatch for values that involve
//! transcendental functions, and [`expr`] parses and evaluates the small
//! formula language used by the catalog data.

pub mod expr;
mod form;
mod matrix;
mod rational;
mod scalar;

pub use form::SymForm;
pub use matrix::{subspace_equal, LinAlgError, RatMatrix, RatVec};
pub use rational::{parse_rational, rat, rat_to_string, Rational};
pub use scalar::{set_tolerance, tolerance, Scalar};
