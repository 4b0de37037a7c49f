use std::fmt;

use serde::{Deserialize, Serialize};

use super::PermError;
use crate::cell::Cell;
use crate::linalg::{int, RationalMatrix};

/// An `m x n` 0/1 matrix with at most one 1 in every row and every column.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartialPermutationWire", into = "PartialPermutationWire")]
pub struct PartialPermutation {
    m: usize,
    n: usize,
    /// `row_one[i-1] = Some(j)` when row `i` has its 1 in column `j`.
    row_one: Vec<Option<usize>>,
    col_one: Vec<Option<usize>>,
}

impl PartialPermutation {
    pub fn new(
        m: usize,
        n: usize,
        ones: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PermError> {
        if m == 0 || n == 0 {
            return Err(PermError::EmptyMatrix);
        }
        let mut row_one = vec![None; m];
        let mut col_one = vec![None; n];
        for (i, j) in ones {
            if i == 0 || i > m || j == 0 || j > n {
                return Err(PermError::OutOfBounds { row: i, col: j, m, n });
            }
            if row_one[i - 1].is_some() {
                return Err(PermError::DuplicateOneInRow { row: i });
            }
            if col_one[j - 1].is_some() {
                return Err(PermError::DuplicateOneInColumn { col: j });
            }
            row_one[i - 1] = Some(j);
            col_one[j - 1] = Some(i);
        }
        Ok(PartialPermutation { m, n, row_one, col_one })
    }

    /// Parses whitespace-separated `0`/`1` tokens, rows separated by newlines
    /// or `/`.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let rows: Vec<Vec<&str>> =
            crate::linalg::matrix_rows(text).map(|line| line.split_whitespace().collect()).collect();
        let Some(first) = rows.first() else {
            return Err(PermError::EmptyMatrix);
        };
        let n = first.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PermError::RaggedRows);
        }
        let mut ones = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, tok) in row.iter().enumerate() {
                match *tok {
                    "0" => {}
                    "1" => ones.push((i + 1, j + 1)),
                    other => {
                        return Err(PermError::NonBinaryEntry {
                            row: i + 1,
                            col: j + 1,
                            token: other.to_string(),
                        })
                    }
                }
            }
        }
        Self::new(rows.len(), n, ones)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, (1..=n).map(|i| (i, i))).expect("identity is a partial permutation")
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self::new(m, n, []).expect("zero is a partial permutation")
    }

    /// `[[I_r, 0], [0, 0]]` of size `m x n`.
    pub fn determinantal(m: usize, n: usize, r: usize) -> Self {
        assert!(r <= m.min(n));
        Self::new(m, n, (1..=r).map(|i| (i, i))).expect("valid determinantal shape")
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Column of the 1 in row `i` (1-based).
    pub fn one_in_row(&self, i: usize) -> Option<usize> {
        self.row_one[i - 1]
    }

    /// Row of the 1 in column `j` (1-based).
    pub fn one_in_col(&self, j: usize) -> Option<usize> {
        self.col_one[j - 1]
    }

    pub fn is_one(&self, cell: Cell) -> bool {
        self.row_one[cell.row - 1] == Some(cell.col)
    }

    /// Positions of the 1s, ordered by row.
    pub fn ones(&self) -> Vec<Cell> {
        self.row_one.iter().enumerate().filter_map(|(i, j)| j.map(|j| Cell::new(i + 1, j))).collect()
    }

    pub fn rank(&self) -> usize {
        self.row_one.iter().flatten().count()
    }

    /// `rk(w_[p,q])`: the number of 1s inside the upper-left `p x q` block.
    pub fn rank_at(&self, p: usize, q: usize) -> usize {
        self.row_one[..p].iter().flatten().filter(|&&j| j <= q).count()
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.n, self.m, self.ones().into_iter().map(|c| (c.col, c.row)))
            .expect("transpose of a partial permutation")
    }

    /// Restriction to the given (1-based, ascending) rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        let ones = rows.iter().enumerate().filter_map(|(a, &r)| {
            let c = self.one_in_row(r)?;
            cols.iter().position(|&x| x == c).map(|b| (a + 1, b + 1))
        });
        Self::new(rows.len(), cols.len(), ones).expect("restriction of a partial permutation")
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let mut a = RationalMatrix::zeros(self.m, self.n);
        for c in self.ones() {
            a[c.index()] = int(1);
        }
        a
    }

    /// The canonical extension to a permutation of size `m + n`.
    ///
    /// Rows of `w` keep their 1; a zero row takes the smallest unused value
    /// above `n`; the appended rows then take the remaining values in
    /// increasing order.
    pub fn extend(&self) -> Permutation {
        let size = self.m + self.n;
        let mut used = vec![false; size + 1];
        let mut image = Vec::with_capacity(size);
        for i in 0..size {
            let v = match self.row_one.get(i) {
                Some(Some(j)) => *j,
                Some(None) => (self.n + 1..=size).find(|&v| !used[v]).expect("free value"),
                None => (1..=size).find(|&v| !used[v]).expect("free value"),
            };
            used[v] = true;
            image.push(v);
        }
        Permutation::new(image).expect("extension is a bijection")
    }

    /// Every partial permutation of size `m x n`, in a fixed order.
    pub fn enumerate(m: usize, n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut row_one = vec![None; m];
        let mut used = vec![false; n + 1];
        fn rec(
            i: usize,
            m: usize,
            n: usize,
            row_one: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            out: &mut Vec<PartialPermutation>,
        ) {
            if i == m {
                let ones = row_one.iter().enumerate().filter_map(|(r, c)| c.map(|c| (r + 1, c)));
                out.push(PartialPermutation::new(m, n, ones).expect("enumerated"));
                return;
            }
            row_one[i] = None;
            rec(i + 1, m, n, row_one, used, out);
            for j in 1..=n {
                if !used[j] {
                    used[j] = true;
                    row_one[i] = Some(j);
                    rec(i + 1, m, n, row_one, used, out);
                    used[j] = false;
                }
            }
            row_one[i] = None;
        }
        rec(0, m, n, &mut row_one, &mut used, &mut out);
        out
    }

    /// Text form: rows separated by newlines.
    pub fn to_text(&self) -> String {
        self.text_rows().join("\n")
    }

    /// Text form on one line: rows separated by ` / `.
    pub fn to_inline(&self) -> String {
        self.text_rows().join(" / ")
    }

    pub fn text_rows(&self) -> Vec<String> {
        (1..=self.m)
            .map(|i| {
                (1..=self.n)
                    .map(|j| if self.one_in_row(i) == Some(j) { "1" } else { "0" })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialPermutation[{}]", self.to_inline())
    }
}

#[derive(Serialize, Deserialize)]
struct PartialPermutationWire {
    m: usize,
    n: usize,
    ones: Vec<Cell>,
}

impl From<PartialPermutation> for PartialPermutationWire {
    fn from(w: PartialPermutation) -> Self {
        PartialPermutationWire { m: w.m, n: w.n, ones: w.ones() }
    }
}

impl TryFrom<PartialPermutationWire> for PartialPermutation {
    type Error = PermError;

    fn try_from(w: PartialPermutationWire) -> Result<Self, PermError> {
        PartialPermutation::new(w.m, w.n, w.ones.into_iter().map(|c| (c.row, c.col)))
    }
}

/// A bijection of `1..=size`, stored as its one-line image.
///
/// As a matrix, row `i` is the unit row vector `e_{image[i]}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        if n == 0 {
            return Err(PermError::NotABijection);
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    /// `sigma(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// The first descent `min { i : sigma(i) > sigma(i+1) }`.
    pub fn first_descent(&self) -> Option<usize> {
        self.image.windows(2).position(|w| w[0] > w[1]).map(|i| i + 1)
    }

    /// Determinant of the permutation matrix, i.e. the sign.
    pub fn sign(&self) -> i64 {
        let inversions = (0..self.size())
            .flat_map(|i| (i + 1..self.size()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.image[i] > self.image[j])
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let n = self.size();
        let mut a = RationalMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, self.image[i] - 1)] = int(1);
        }
        a
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { image: cur.clone() });
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}
