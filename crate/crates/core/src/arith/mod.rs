//! Exact complex arithmetic over ℚ-linear combinations of square roots.
//!
//! Every proportionality and minor decision in the crate goes through
//! [`ExactScalar::is_zero`], which is exact: square roots of distinct
//! square-free integers are linearly independent over ℚ.

mod radical;
mod scalar;

pub use radical::{coprime_base, is_square_free, square_free_split};
pub use scalar::{cross_minor, ExactScalar, MAX_INVERSE_GENERATORS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inverse needs {generators} independent square-root generators (limit {MAX_INVERSE_GENERATORS})")]
    DivisionUnsupported { generators: usize },
}
