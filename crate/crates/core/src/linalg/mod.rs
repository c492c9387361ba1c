//! Exact linear algebra over ℚ(i).

pub mod echelon;
pub mod matrix;
pub mod modular;
pub mod rational;
pub mod scalar;
pub mod sparse;
pub mod subspace;

pub use echelon::Echelon;
pub use matrix::{joint_generalized_space, ExactMatrix};
pub use rational::Rational;
pub use scalar::{Gq, GaussianRational, ScaledScalar};
pub use sparse::{SparseMatrix, SparseVec};
pub use subspace::Subspace;
