use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use super::rational::Rational;
use super::LinalgError;

/// Exact determinant.
///
/// Each row is scaled to integers by the lcm of its denominators and the
/// integer matrix is reduced with fraction-free (Bareiss) elimination, so
/// intermediate entries stay bounded by minors of the input.
pub fn det(a: &RationalMatrix) -> Result<Rational, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = a.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        m.push(row.iter().map(|q| q.numer() * (&l / q.denom())).collect());
        scale *= l;
    }
    let d = bareiss(&mut m);
    Ok(Rational::new(d, scale))
}

fn bareiss(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Row-reduces `m` in place, processing columns left to right, and returns the
/// pivot column of each pivot row.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rows(a: &RationalMatrix) -> Vec<Vec<Rational>> {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

pub fn rank(a: &RationalMatrix) -> usize {
    row_reduce(&mut to_rows(a), a.cols()).len()
}

/// `profile[q-1] = rank` of the first `q` columns, for `q = 1..=cols`.
///
/// Row operations never change the linear relations among columns, so the
/// number of pivots found among the first `q` columns of one left-to-right
/// elimination is the rank of that column prefix.
pub fn column_rank_profile(a: &RationalMatrix) -> Vec<usize> {
    let pivots = row_reduce(&mut to_rows(a), a.cols());
    (1..=a.cols()).map(|q| pivots.iter().filter(|&&c| c < q).count()).collect()
}

/// 0-based indices of a maximal linearly independent set of columns (the
/// pivot columns, leftmost first).
pub fn independent_columns(a: &RationalMatrix) -> Vec<usize> {
    row_reduce(&mut to_rows(a), a.cols())
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &RationalMatrix) -> Vec<Vec<Rational>> {
    let n = a.cols();
    let mut m = to_rows(a);
    let pivots = row_reduce(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves `a X = b` for square nonsingular `a` and every column of `b`.
pub fn solve_many(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if b.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "system of size {} with right-hand side of {} rows",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.rows();
    let k = b.cols();
    if n == 0 {
        return Ok(RationalMatrix::zeros(0, k));
    }
    let mut m: Vec<Vec<Rational>> =
        (0..n).map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect()).collect();
    let pivots = row_reduce(&mut m, n + k);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    Ok(RationalMatrix::from_fn(n, k, |i, j| m[i][n + j].clone()))
}

pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let rhs = RationalMatrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    Ok(solve_many(a, &rhs)?.column(0))
}

/// Solves a symmetric Gram system exactly. A singular system is reported as
/// [`LinalgError::SingularGram`].
pub fn solve_spd(g: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if g.is_square() && *g != g.transpose() {
        return Err(LinalgError::DimensionMismatch("Gram matrix is not symmetric".into()));
    }
    solve(g, b).map_err(|e| match e {
        LinalgError::Singular => LinalgError::SingularGram,
        other => other,
    })
}

/// Matrix of pairwise trace inner products.
pub fn gram(vectors: &[RationalMatrix]) -> Result<RationalMatrix, LinalgError> {
    if let Some(first) = vectors.first() {
        if vectors.iter().any(|v| v.shape() != first.shape()) {
            return Err(LinalgError::DimensionMismatch("Gram of unequal shapes".into()));
        }
    }
    let k = vectors.len();
    let mut g = RationalMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = vectors[i].inner(&vectors[j]);
            g[(j, i)] = v.clone();
            g[(i, j)] = v;
        }
    }
    Ok(g)
}

/// Orthogonal projector onto the column space of `span`, computed as
/// `B (B^T B)^{-1} B^T` over an independent subset `B` of its columns.
pub fn projector(span: &RationalMatrix) -> RationalMatrix {
    let cols = independent_columns(span);
    let n = span.rows();
    if cols.is_empty() {
        return RationalMatrix::zeros(n, n);
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let b = span.submatrix(&all_rows, &cols);
    let bt = b.transpose();
    let g = &bt * &b;
    let x = solve_many(&g, &bt).expect("independent columns have a nonsingular Gram matrix");
    &b * &x
}
