use std::fmt;

use serde::{Deserialize, Serialize};

/// A matrix position, 1-based in both coordinates.
///
/// Ordering is lexicographic (row first), which is the order used for the
/// normal frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// 0-based `(row, col)` for indexing into a matrix.
    pub fn index(self) -> (usize, usize) {
        (self.row - 1, self.col - 1)
    }

    pub fn transpose(self) -> Self {
        Cell::new(self.col, self.row)
    }

    /// `true` if `self` lies weakly above and to the left of `other`.
    pub fn dominated_by(self, other: Cell) -> bool {
        self.row <= other.row && self.col <= other.col
    }
}

impl From<(usize, usize)> for Cell {
    fn from((row, col): (usize, usize)) -> Self {
        Cell { row, col }
    }
}

impl From<[usize; 2]> for Cell {
    fn from([row, col]: [usize; 2]) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for [usize; 2] {
    fn from(c: Cell) -> Self {
        [c.row, c.col]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}
