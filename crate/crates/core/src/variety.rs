//! The matrix Schubert variety `X_w` as a computational object: rank
//! conditions, sampling of regular points from the triangular orbit, the
//! gradient normal frame and the per-cell mean-curvature obstruction.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cell::Cell;
use crate::linalg::{
    column_rank_profile, det, gram, int, minor_grad, minor_second_partials, solve_many, IndexedMinor,
    LinalgError, Rational, RationalMatrix,
};
use crate::perm::{PartialPermutation, RotheDiagram};

pub const DEFAULT_ENTRY_BOUND: i64 = 3;
const MAX_DRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point is not a regular point of X_w")]
    NotRegularPoint,
    #[error("normal frame is degenerate: {0}")]
    FrameDegenerate(String),
    #[error("no invertible triangular pair after {0} draws")]
    SamplingFailure(usize),
    #[error("factor is not invertible triangular: {0}")]
    BadFactor(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `rk(A_[p,q])` for all `p, q`, as `profile[p-1][q-1]`.
///
/// One left-to-right elimination per row prefix gives the ranks of every
/// column prefix of that block.
pub fn rank_profile(a: &RationalMatrix) -> Vec<Vec<usize>> {
    (1..=a.rows()).map(|p| column_rank_profile(&a.upper_left(p, a.cols()))).collect()
}

fn check_dims(w: &PartialPermutation, a: &RationalMatrix) -> Result<(), VarietyError> {
    if a.shape() != (w.rows(), w.cols()) {
        return Err(VarietyError::DimensionMismatch(format!(
            "point is {}x{}, partial permutation is {}x{}",
            a.rows(),
            a.cols(),
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

fn compare_ranks(
    w: &PartialPermutation,
    a: &RationalMatrix,
    ok: impl Fn(usize, usize) -> bool,
) -> Result<bool, VarietyError> {
    check_dims(w, a)?;
    let profile = rank_profile(a);
    Ok((1..=w.rows()).all(|p| (1..=w.cols()).all(|q| ok(profile[p - 1][q - 1], w.rank_at(p, q)))))
}

/// `A` lies in the closure: `rk(A_[p,q]) <= rk(w_[p,q])` for all `p, q`.
pub fn contains_closure(w: &PartialPermutation, a: &RationalMatrix) -> Result<bool, VarietyError> {
    compare_ranks(w, a, |got, bound| got <= bound)
}

/// `A` lies in the regular part: `rk(A_[p,q]) = rk(w_[p,q])` for all `p, q`.
pub fn contains_regular(w: &PartialPermutation, a: &RationalMatrix) -> Result<bool, VarietyError> {
    compare_ranks(w, a, |got, bound| got == bound)
}

/// A point `A = lambda w mu` of `X_w`, with its triangular factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularPoint {
    pub point: RationalMatrix,
    pub lower_factor: RationalMatrix,
    pub upper_factor: RationalMatrix,
    #[serde(serialize_with = "seed_or_manual")]
    pub seed: Option<u64>,
}

fn seed_or_manual<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
    match seed {
        Some(v) => s.serialize_u64(*v),
        None => s.serialize_str("manual"),
    }
}

impl RegularPoint {
    /// `lambda w mu` for given triangular factors.
    pub fn manual(
        w: &PartialPermutation,
        lower: RationalMatrix,
        upper: RationalMatrix,
    ) -> Result<Self, VarietyError> {
        if lower.shape() != (w.rows(), w.rows()) || upper.shape() != (w.cols(), w.cols()) {
            return Err(VarietyError::DimensionMismatch("factor sizes".into()));
        }
        check_triangular(&lower, true)?;
        check_triangular(&upper, false)?;
        let point = &(&lower * &w.to_matrix()) * &upper;
        Ok(RegularPoint { point, lower_factor: lower, upper_factor: upper, seed: None })
    }
}

fn check_triangular(t: &RationalMatrix, lower: bool) -> Result<(), VarietyError> {
    let n = t.rows();
    for i in 0..n {
        if t[(i, i)].is_zero() {
            return Err(VarietyError::BadFactor(format!("zero diagonal entry {}", i + 1)));
        }
        for j in 0..n {
            let off = if lower { j > i } else { j < i };
            if off && !t[(i, j)].is_zero() {
                return Err(VarietyError::BadFactor(format!("entry ({},{})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn random_triangular(rng: &mut ChaCha8Rng, n: usize, lower: bool, bound: i64) -> RationalMatrix {
    RationalMatrix::from_fn(n, n, |i, j| {
        if (lower && j > i) || (!lower && j < i) {
            Rational::zero()
        } else {
            int(rng.gen_range(-bound..=bound))
        }
    })
}

fn has_zero_diagonal(t: &RationalMatrix) -> bool {
    (0..t.rows()).any(|i| t[(i, i)].is_zero())
}

/// A seeded regular point; equivalent to [`sample_regular_indexed`] with index 0.
pub fn sample_regular(
    w: &PartialPermutation,
    seed: u64,
    entry_bound: i64,
) -> Result<RegularPoint, VarietyError> {
    sample_regular_indexed(w, seed, 0, entry_bound)
}

/// The `index`-th sample of a seeded stream. Each index draws from its own
/// ChaCha stream, so samples are reproducible independently of order.
///
/// Entries of `lambda` (lower triangular) and `mu` (upper triangular) are
/// uniform integers in `[-entry_bound, entry_bound]`; a pair with a zero
/// diagonal entry is redrawn.
pub fn sample_regular_indexed(
    w: &PartialPermutation,
    seed: u64,
    index: u64,
    entry_bound: i64,
) -> Result<RegularPoint, VarietyError> {
    assert!(entry_bound >= 1, "entry bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    for _ in 0..MAX_DRAWS {
        let lower = random_triangular(&mut rng, w.rows(), true, entry_bound);
        let upper = random_triangular(&mut rng, w.cols(), false, entry_bound);
        if has_zero_diagonal(&lower) || has_zero_diagonal(&upper) {
            continue;
        }
        let mut p = RegularPoint::manual(w, lower, upper)?;
        p.seed = Some(seed);
        debug_assert!(contains_regular(w, &p.point)?);
        return Ok(p);
    }
    Err(VarietyError::SamplingFailure(MAX_DRAWS))
}

/// The gradients of the defining minors at a regular point, in lexicographic
/// cell order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFrame {
    pub cells: Vec<Cell>,
    #[serde(skip)]
    pub minors: Vec<IndexedMinor>,
    pub gradients: Vec<RationalMatrix>,
    pub gram: RationalMatrix,
    /// `p[k][l] = d f_{cells[k]} / d x_{cells[l]}`.
    pub triangular_check: RationalMatrix,
}

impl NormalFrame {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell)
    }

    /// The same frame listed in the order `order` (a permutation of
    /// `0..len`). The triangular check is kept in lexicographic order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        let pick = |v: &[RationalMatrix]| order.iter().map(|&k| v[k].clone()).collect::<Vec<_>>();
        let gradients = pick(&self.gradients);
        NormalFrame {
            cells: order.iter().map(|&k| self.cells[k]).collect(),
            minors: order.iter().map(|&k| self.minors[k].clone()).collect(),
            gram: gram(&gradients).expect("equal shapes"),
            gradients,
            triangular_check: self.triangular_check.clone(),
        }
    }
}

/// Whether `p` is lower triangular with an all-nonzero diagonal.
pub fn is_lower_triangular_invertible(p: &RationalMatrix) -> bool {
    (0..p.rows()).all(|k| !p[(k, k)].is_zero() && (k + 1..p.cols()).all(|l| p[(k, l)].is_zero()))
}

pub fn normal_frame(w: &PartialPermutation, a: &RationalMatrix) -> Result<NormalFrame, VarietyError> {
    if !contains_regular(w, a)? {
        return Err(VarietyError::NotRegularPoint);
    }
    let d = RotheDiagram::new(w);
    let cells = d.cells().to_vec();
    let mut minors = Vec::with_capacity(cells.len());
    let mut gradients = Vec::with_capacity(cells.len());
    for &c in &cells {
        let f = d.minor(c).expect("diagram cell");
        if f.size() > 1 {
            let rc = d.rc_sets(c).expect("diagram cell");
            let r: Vec<usize> = rc.rows.iter().map(|i| i - 1).collect();
            let q: Vec<usize> = rc.cols.iter().map(|j| j - 1).collect();
            if det(&a.submatrix(&r, &q))?.is_zero() {
                return Err(VarietyError::FrameDegenerate(format!(
                    "restriction to R x C of cell {c} is singular"
                )));
            }
        }
        gradients.push(minor_grad(a, &f)?);
        minors.push(f);
    }
    let k = cells.len();
    let triangular_check = RationalMatrix::from_fn(k, k, |i, j| gradients[i].at(cells[j]).clone());
    if !is_lower_triangular_invertible(&triangular_check) {
        return Err(VarietyError::FrameDegenerate("P is not lower triangular invertible".into()));
    }
    let gram = gram(&gradients)?;
    Ok(NormalFrame { cells, minors, gradients, gram, triangular_check })
}

/// `P = N^T G^{-1} N`, the orthogonal projector onto the normal space, as an
/// `mn x mn` matrix on row-major flattened coordinates.
pub fn normal_projector(frame: &NormalFrame) -> Result<RationalMatrix, VarietyError> {
    let Some(first) = frame.gradients.first() else {
        return Err(VarietyError::FrameDegenerate("empty frame".into()));
    };
    let (m, n) = first.shape();
    let nmat = RationalMatrix::from_fn(frame.len(), m * n, |k, e| frame.gradients[k][(e / n, e % n)].clone());
    let dual = solve_many(&frame.gram, &nmat).map_err(|e| match e {
        LinalgError::Singular => VarietyError::FrameDegenerate("Gram matrix is singular".into()),
        other => other.into(),
    })?;
    Ok(&nmat.transpose() * &dual)
}

/// Per-cell normal-space traces of the minor Hessians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionVector {
    pub per_cell: Vec<(Cell, Rational)>,
}

impl ObstructionVector {
    pub fn get(&self, cell: Cell) -> Option<&Rational> {
        self.per_cell.iter().find(|(c, _)| *c == cell).map(|(_, v)| v)
    }

    pub fn is_zero(&self) -> bool {
        self.per_cell.iter().all(|(_, v)| v.is_zero())
    }

    pub fn len(&self) -> usize {
        self.per_cell.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_cell.is_empty()
    }

    /// Cells with a nonzero trace.
    pub fn support(&self) -> Vec<Cell> {
        self.per_cell.iter().filter(|(_, v)| !v.is_zero()).map(|(c, _)| *c).collect()
    }
}

impl Serialize for ObstructionVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            cell: Cell,
            #[serde(with = "crate::linalg::serde_rational")]
            trace: &'a Rational,
        }
        s.collect_seq(self.per_cell.iter().map(|(cell, trace)| Entry { cell: *cell, trace }))
    }
}

/// `tr(Hess f_cell |_normal)` for every cell of the frame, in frame order.
///
/// The trace is `sum_mu Hess f(N_mu, W_mu)` with `W = G^{-1} N` the dual
/// frame, evaluated as the pairing of the Hessian's nonzero second partials
/// with the normal projector.
pub fn obstruction_from_frame(
    a: &RationalMatrix,
    frame: &NormalFrame,
) -> Result<ObstructionVector, VarietyError> {
    if frame.is_empty() {
        return Ok(ObstructionVector { per_cell: Vec::new() });
    }
    let n = a.cols();
    let flat = |c: Cell| (c.row - 1) * n + (c.col - 1);
    let proj = normal_projector(frame)?;
    let mut per_cell = Vec::with_capacity(frame.len());
    for (k, f) in frame.minors.iter().enumerate() {
        let mut trace = Rational::zero();
        // A single variable has vanishing Hessian.
        if f.size() > 1 {
            for (c1, c2, v) in minor_second_partials(a, f)? {
                let p = &proj[(flat(c1), flat(c2))];
                if !p.is_zero() {
                    trace += v * p;
                }
            }
        }
        per_cell.push((frame.cells[k], trace));
    }
    Ok(ObstructionVector { per_cell })
}

pub fn obstruction(w: &PartialPermutation, a: &RationalMatrix) -> Result<ObstructionVector, VarietyError> {
    let frame = normal_frame(w, a)?;
    obstruction_from_frame(a, &frame)
}

/// Whether the mean curvature vector of `X_w` vanishes at `A`.
pub fn is_stationary_at(w: &PartialPermutation, a: &RationalMatrix) -> Result<bool, VarietyError> {
    Ok(obstruction(w, a)?.is_zero())
}

/// Velocities of one-parameter triangular subgroups through `A`: `E_ij A` for
/// `i >= j` and `A E_ij` for `i <= j`.
pub fn tangent_generators(a: &RationalMatrix) -> Vec<RationalMatrix> {
    let (m, n) = a.shape();
    let mut out = Vec::with_capacity(m * (m + 1) / 2 + n * (n + 1) / 2);
    for i in 1..=m {
        for j in 1..=i {
            out.push(&RationalMatrix::unit(m, m, Cell::new(i, j)) * a);
        }
    }
    for i in 1..=n {
        for j in i..=n {
            out.push(a * &RationalMatrix::unit(n, n, Cell::new(i, j)));
        }
    }
    out
}

/// `A` with `lambda = I`, `mu = I`.
pub fn base_point(w: &PartialPermutation) -> RegularPoint {
    RegularPoint::manual(w, RationalMatrix::identity(w.rows()), RationalMatrix::identity(w.cols()))
        .expect("identity factors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn pp(s: &str) -> PartialPermutation {
        PartialPermutation::parse(s).unwrap()
    }

    #[test]
    fn base_point_is_w() {
        let w = pp("0 1 0 / 0 0 0 / 1 0 0");
        let p = base_point(&w);
        assert_eq!(p.point, w.to_matrix());
        assert!(contains_regular(&w, &p.point).unwrap());
        assert_eq!(rank_profile(&p.point), RotheDiagram::new(&w).rank_table());
    }

    #[test]
    fn zero_matrix_is_in_every_closure() {
        let w = pp("1 0 / 0 1");
        assert!(contains_closure(&w, &RationalMatrix::zeros(2, 2)).unwrap());
        assert!(!contains_regular(&w, &RationalMatrix::zeros(2, 2)).unwrap());
        assert!(contains_closure(&w, &RationalMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn samples_are_regular_and_reproducible() {
        let w = pp("0 1 0 / 0 0 0 / 1 0 0");
        let a = sample_regular(&w, 42, 3).unwrap();
        assert!(contains_regular(&w, &a.point).unwrap());
        assert_eq!(a, sample_regular(&w, 42, 3).unwrap());
        let b = sample_regular_indexed(&w, 42, 1, 3).unwrap();
        assert_ne!(a.point, b.point);
        assert_eq!(a.point, &(&a.lower_factor * &w.to_matrix()) * &a.upper_factor);
    }

    #[test]
    fn manual_factors_are_checked() {
        let w = pp("1 0 / 0 0");
        let bad = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(RegularPoint::manual(&w, bad, RationalMatrix::identity(2)).is_err());
    }

    #[test]
    fn worked_example_trace() {
        let w = pp("0 1 0 / 1 0 0 / 0 0 0");
        let a = RationalMatrix::from_i64(&[&[0, 1, 1], &[1, 1, 0], &[0, 1, 1]]);
        let ob = obstruction(&w, &a).unwrap();
        assert_eq!(ob.get(Cell::new(3, 3)), Some(&ratio(2, 5)));
        assert_eq!(ob.get(Cell::new(1, 1)), Some(&int(0)));
        assert!(!is_stationary_at(&w, &a).unwrap());
    }

    #[test]
    fn empty_diagram_has_empty_obstruction() {
        let w = PartialPermutation::identity(2);
        let a = sample_regular(&w, 0, 3).unwrap().point;
        assert!(obstruction(&w, &a).unwrap().is_empty());
        assert!(is_stationary_at(&w, &a).unwrap());
    }

    #[test]
    fn non_regular_point_rejected() {
        let w = PartialPermutation::determinantal(2, 2, 1);
        assert_eq!(obstruction(&w, &RationalMatrix::zeros(2, 2)), Err(VarietyError::NotRegularPoint));
    }

    #[test]
    fn generator_count() {
        let a = RationalMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(tangent_generators(&a).len(), 3 + 6);
    }
}
