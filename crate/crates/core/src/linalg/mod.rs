//! Exact linear algebra over prime fields.

pub mod field;
pub mod matrix;
pub mod span;
pub mod subspace;

pub use field::{check_modulus, is_prime, FieldElem};
pub use matrix::{FieldMatrix, LinearSolution, Rref};
pub use span::MatrixSpace;
pub use subspace::Subspace;
