//! Partial permutations and their combinatorics: the extension to a
//! permutation, the Rothe diagram, vexillarity, the `Gr2` block forms and the
//! product decomposition of diagrams that contain `(1,1)`.

mod classify;
mod decompose;
mod diagram;
mod partial;

pub use classify::{classify, Classification, Gr2Params, Verdict};
pub use decompose::{decompose, Decomposition, Factor, Placement};
pub use diagram::{is_vexillary_pattern, is_vexillary_restriction, Component, RcSets, RotheDiagram};
pub use partial::{PartialPermutation, Permutation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("rows have unequal lengths")]
    RaggedRows,
    #[error("entry ({row},{col}) is {token:?}, expected 0 or 1")]
    NonBinaryEntry { row: usize, col: usize, token: String },
    #[error("row {row} contains more than one 1")]
    DuplicateOneInRow { row: usize },
    #[error("column {col} contains more than one 1")]
    DuplicateOneInColumn { col: usize },
    #[error("position ({row},{col}) lies outside a {m}x{n} matrix")]
    OutOfBounds { row: usize, col: usize, m: usize, n: usize },
    #[error("image is not a bijection")]
    NotABijection,
    #[error("partial permutation is not vexillary")]
    NotVexillary,
    #[error("(1,1) is not a cell of the Rothe diagram")]
    TopLeftNotInDiagram,
    #[error("coordinate {0} is dominated by a diagram cell but not covered by any block")]
    Unclassified(crate::Cell),
}
