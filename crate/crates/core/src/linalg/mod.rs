//! Exact rational dense linear algebra and determinant calculus.

mod elim;
mod matrix;
mod minor;
mod rational;

pub use elim::{
    column_rank_profile, det, gram, independent_columns, nullspace, projector, rank, solve, solve_many,
    solve_spd,
};
pub(crate) use matrix::split_rows as matrix_rows;
pub use matrix::RationalMatrix;
pub use minor::{
    minor_eval, minor_grad, minor_hessian_bilinear, minor_second_partial, minor_second_partials, IndexedMinor,
};
pub use rational::{format_rational, int, parse_rational, ratio, serde_rational, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("minor index sets must be strictly ascending and of equal length")]
    MalformedMinor,
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("linear system is singular")]
    Singular,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("rows have unequal lengths")]
    RaggedRows,
    #[error("empty matrix")]
    Empty,
}
