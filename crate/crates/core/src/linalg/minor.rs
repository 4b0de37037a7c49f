use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::elim::det;
use super::matrix::RationalMatrix;
use super::rational::Rational;
use super::LinalgError;
use crate::cell::Cell;

/// A minor of the variable matrix, named by its (1-based, strictly ascending)
/// row and column index lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexedMinor {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl IndexedMinor {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, LinalgError> {
        let ascending = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]) && v.first() != Some(&0);
        if rows.len() != cols.len() || rows.is_empty() || !ascending(&rows) || !ascending(&cols) {
            return Err(LinalgError::MalformedMinor);
        }
        Ok(IndexedMinor { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Whether the variable `x_cell` occurs in this minor.
    pub fn contains(&self, cell: Cell) -> bool {
        self.local(cell).is_some()
    }

    /// 0-based position of `cell` inside the minor's block.
    fn local(&self, cell: Cell) -> Option<(usize, usize)> {
        let s = self.rows.iter().position(|&r| r == cell.row)?;
        let t = self.cols.iter().position(|&c| c == cell.col)?;
        Some((s, t))
    }

    fn check_bounds(&self, a: &RationalMatrix) -> Result<(), LinalgError> {
        let last_row = *self.rows.last().expect("nonempty");
        let last_col = *self.cols.last().expect("nonempty");
        if last_row > a.rows() {
            return Err(LinalgError::IndexOutOfRange { index: last_row, bound: a.rows() });
        }
        if last_col > a.cols() {
            return Err(LinalgError::IndexOutOfRange { index: last_col, bound: a.cols() });
        }
        Ok(())
    }

    fn block(&self, a: &RationalMatrix) -> RationalMatrix {
        let r: Vec<usize> = self.rows.iter().map(|i| i - 1).collect();
        let c: Vec<usize> = self.cols.iter().map(|j| j - 1).collect();
        a.submatrix(&r, &c)
    }
}

fn sign(parity: usize) -> Rational {
    if parity.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Determinant of `b` with rows `skip_rows` and columns `skip_cols` deleted.
fn complementary(b: &RationalMatrix, skip_rows: &[usize], skip_cols: &[usize]) -> Rational {
    let r: Vec<usize> = (0..b.rows()).filter(|i| !skip_rows.contains(i)).collect();
    let c: Vec<usize> = (0..b.cols()).filter(|j| !skip_cols.contains(j)).collect();
    det(&b.submatrix(&r, &c)).expect("square by construction")
}

pub fn minor_eval(a: &RationalMatrix, f: &IndexedMinor) -> Result<Rational, LinalgError> {
    f.check_bounds(a)?;
    det(&f.block(a))
}

/// `(d f / d x_ij)(A)` as an ambient-sized matrix: signed cofactors of the
/// indexed block, zero elsewhere.
pub fn minor_grad(a: &RationalMatrix, f: &IndexedMinor) -> Result<RationalMatrix, LinalgError> {
    f.check_bounds(a)?;
    let b = f.block(a);
    let mut g = RationalMatrix::zeros(a.rows(), a.cols());
    for (s, &r) in f.rows.iter().enumerate() {
        for (t, &c) in f.cols.iter().enumerate() {
            let cof = complementary(&b, &[s], &[t]);
            if !cof.is_zero() {
                g[(r - 1, c - 1)] = sign(s + t) * cof;
            }
        }
    }
    Ok(g)
}

/// `d^2 f / d x_{c1} d x_{c2}` at `A`. Zero unless both variables occur in
/// the minor in distinct rows and distinct columns; then a signed
/// complementary `(k-2) x (k-2)` minor.
pub fn minor_second_partial(
    a: &RationalMatrix,
    f: &IndexedMinor,
    c1: Cell,
    c2: Cell,
) -> Result<Rational, LinalgError> {
    f.check_bounds(a)?;
    let (Some((s1, t1)), Some((s2, t2))) = (f.local(c1), f.local(c2)) else {
        return Ok(Rational::zero());
    };
    if s1 == s2 || t1 == t2 {
        return Ok(Rational::zero());
    }
    // Position of (s2, t2) after deleting row s1 and column t1.
    let s2p = s2 - usize::from(s2 > s1);
    let t2p = t2 - usize::from(t2 > t1);
    let b = f.block(a);
    Ok(sign(s1 + t1 + s2p + t2p) * complementary(&b, &[s1, s2], &[t1, t2]))
}

/// Every nonzero second partial `d^2 f / d x_{c1} d x_{c2}` at `A`, as
/// `(c1, c2, value)` over ordered pairs of ambient cells.
pub fn minor_second_partials(
    a: &RationalMatrix,
    f: &IndexedMinor,
) -> Result<Vec<(Cell, Cell, Rational)>, LinalgError> {
    f.check_bounds(a)?;
    let k = f.size();
    let b = f.block(a);
    let mut out = Vec::new();
    for s1 in 0..k {
        for s2 in s1 + 1..k {
            for t1 in 0..k {
                for t2 in 0..k {
                    if t1 == t2 {
                        continue;
                    }
                    let t2p = t2 - usize::from(t2 > t1);
                    let v = sign(s1 + t1 + s2 - 1 + t2p) * complementary(&b, &[s1, s2], &[t1, t2]);
                    if v.is_zero() {
                        continue;
                    }
                    let c1 = Cell::new(f.rows[s1], f.cols[t1]);
                    let c2 = Cell::new(f.rows[s2], f.cols[t2]);
                    out.push((c2, c1, v.clone()));
                    out.push((c1, c2, v));
                }
            }
        }
    }
    Ok(out)
}

/// The Hessian of `f` at `A` applied to directions `V` and `W`.
///
/// Since `f` is a determinant, it is linear in each row of its block; the
/// second derivative along `(V, W)` is the sum, over ordered pairs of
/// distinct block rows `(i, j)`, of the block determinant with row `i`
/// replaced by `V`'s restriction and row `j` by `W`'s.
pub fn minor_hessian_bilinear(
    a: &RationalMatrix,
    f: &IndexedMinor,
    v: &RationalMatrix,
    w: &RationalMatrix,
) -> Result<Rational, LinalgError> {
    f.check_bounds(a)?;
    if v.shape() != a.shape() || w.shape() != a.shape() {
        return Err(LinalgError::DimensionMismatch(format!("directions must be {}x{}", a.rows(), a.cols())));
    }
    let k = f.size();
    let b = f.block(a);
    let vb = f.block(v);
    let wb = f.block(w);
    let row_is_zero = |m: &RationalMatrix, i: usize| m.row(i).iter().all(Zero::is_zero);
    let mut total = Rational::zero();
    for i in 0..k {
        if row_is_zero(&vb, i) {
            continue;
        }
        for j in 0..k {
            if i == j || row_is_zero(&wb, j) {
                continue;
            }
            let mut m = b.clone();
            for t in 0..k {
                m[(i, t)] = vb[(i, t)].clone();
                m[(j, t)] = wb[(j, t)].clone();
            }
            total += det(&m)?;
        }
    }
    Ok(total)
}
