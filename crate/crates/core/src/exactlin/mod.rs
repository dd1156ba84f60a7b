//! Exact rational arithmetic and dense linear algebra.

mod matrix;
mod modular;
mod rational;
mod subspace;

pub use matrix::{dot, primitive, Matrix, Rref};
pub use modular::ModMatrix;
pub use rational::Rational;
pub use subspace::SubspaceBasis;
