//! The reflection symmetries of `Gr2` matrix Schubert varieties.
//!
//! For a regular point `Q` of `X_w`, with `w` in the block layout of
//! [`Gr2Params`], two involutive isometries fix `Q` and preserve the closure:
//! `Phi_Q` reflects every column through the column space of `Q`, and `Psi_Q`
//! reflects the first `r1 + n1` coordinates of every row through the row
//! space of `Q_[m, r1+n1]`. Together with the tangent constructions `t_c` and
//! `t_r` they force every normal vector that both maps preserve to vanish,
//! so the mean curvature is zero. This module builds those maps exactly and
//! checks each step on sampled points.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{int, nullspace, projector, ratio, solve_many, LinalgError, Rational, RationalMatrix};
use crate::perm::{Gr2Params, PartialPermutation};
use crate::variety::{
    contains_closure, contains_regular, normal_frame, obstruction_from_frame, sample_regular_indexed,
    NormalFrame, RegularPoint, VarietyError, DEFAULT_ENTRY_BOUND,
};

/// Line parameters for the tangency checks `Q + s t in closure(X_w)`.
pub fn line_parameters() -> Vec<Rational> {
    vec![int(-7), int(-1), ratio(1, 3), int(2), int(11)]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gr2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is nonzero outside the first {0} columns of the block layout")]
    ShapeViolation(usize),
    #[error("the top {0} rows of Q restricted to the first block are rank deficient")]
    DegenerateRowSpace(usize),
    #[error("Q is not a regular point of X_w")]
    NotRegularPoint,
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An orthogonal reflection fixing a subspace and negating its complement,
/// built as `2P - I` from the exact orthogonal projector `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionData {
    /// Spanning vectors of the fixed subspace, as columns.
    pub subspace_basis: RationalMatrix,
    pub projector: RationalMatrix,
    pub reflection: RationalMatrix,
}

impl ReflectionData {
    /// The reflection through the column space of `span`.
    pub fn from_columns(span: &RationalMatrix) -> Self {
        let p = projector(span);
        let n = p.rows();
        let reflection = &p.scale(&int(2)) - &RationalMatrix::identity(n);
        ReflectionData { subspace_basis: span.clone(), projector: p, reflection }
    }

    pub fn size(&self) -> usize {
        self.reflection.rows()
    }

    /// `R^2 = I`, `R^T = R`, `R` fixes every basis vector and `R (I - P) = -(I - P)`.
    pub fn is_valid(&self) -> bool {
        let n = self.size();
        let id = RationalMatrix::identity(n);
        let r = &self.reflection;
        let complement = &id - &self.projector;
        (r * r) == id
            && *r == r.transpose()
            && (r * &self.subspace_basis) == self.subspace_basis
            && (r * &complement) == -&complement
    }
}

/// A `Gr2` partial permutation with a regular point, and the reflections at
/// that point. Everything below `params`, `w` and `q` is kept in the
/// untransposed block layout; the public maps transpose in and out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gr2Instance {
    pub params: Gr2Params,
    pub w: PartialPermutation,
    pub q: RegularPoint,
    layout_q: RationalMatrix,
    /// `r1 + n1`.
    split: usize,
    /// `U_Q` on `R^m`.
    pub column: ReflectionData,
    /// `V_Q` on `R^{r1+n1}`.
    pub row: ReflectionData,
    /// `V_Q` extended by the identity to `R^n`.
    pub v_hat: RationalMatrix,
    /// `(Q_[r1, r1+n1] Q_[r1, r1+n1]^T)^{-1} Q_[r1, r1+n1]`: maps a vector `v`
    /// of the row space to the coefficients `c` with `c Q_[r1, r1+n1] = v`.
    row_coefficients: RationalMatrix,
}

impl Gr2Instance {
    pub fn new(params: Gr2Params, q: RegularPoint) -> Result<Self, Gr2Error> {
        let w = params.build();
        if q.point.shape() != (w.rows(), w.cols()) {
            return Err(Gr2Error::DimensionMismatch(format!(
                "point is {}x{}, layout is {}x{}",
                q.point.rows(),
                q.point.cols(),
                w.rows(),
                w.cols()
            )));
        }
        if !contains_regular(&w, &q.point)? {
            return Err(Gr2Error::NotRegularPoint);
        }
        let layout_q = if params.transposed { q.point.transpose() } else { q.point.clone() };
        let (m, n) = layout_q.shape();
        let split = params.r1 + params.n1;
        let all_rows: Vec<usize> = (0..m).collect();
        let first: Vec<usize> = (0..split).collect();

        let column = ReflectionData::from_columns(&layout_q);
        let row = ReflectionData::from_columns(&layout_q.submatrix(&all_rows, &first).transpose());
        let mut v_hat = RationalMatrix::identity(n);
        for i in 0..split {
            for j in 0..split {
                v_hat[(i, j)] = row.reflection[(i, j)].clone();
            }
        }

        let top: Vec<usize> = (0..params.r1).collect();
        let q1 = layout_q.submatrix(&top, &first);
        let row_coefficients =
            solve_many(&(&q1 * &q1.transpose()), &q1).map_err(|_| Gr2Error::DegenerateRowSpace(params.r1))?;

        Ok(Gr2Instance { params, w, q, layout_q, split, column, row, v_hat, row_coefficients })
    }

    /// The `index`-th seeded regular point of `X_w`.
    pub fn sample(params: Gr2Params, seed: u64, index: u64, entry_bound: i64) -> Result<Self, Gr2Error> {
        let q = sample_regular_indexed(&params.build(), seed, index, entry_bound)?;
        Self::new(params, q)
    }

    /// Number of leading layout columns `r1 + n1` on which `Psi_Q` acts.
    pub fn split(&self) -> usize {
        self.split
    }

    fn to_layout(&self, a: &RationalMatrix) -> Result<RationalMatrix, Gr2Error> {
        if a.shape() != self.q.point.shape() {
            return Err(Gr2Error::DimensionMismatch(format!(
                "expected a {}x{} matrix, got {}x{}",
                self.q.point.rows(),
                self.q.point.cols(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(if self.params.transposed { a.transpose() } else { a.clone() })
    }

    fn out_of_layout(&self, a: RationalMatrix) -> RationalMatrix {
        if self.params.transposed {
            a.transpose()
        } else {
            a
        }
    }
}

/// `Phi_Q(A) = U_Q A`.
pub fn phi(inst: &Gr2Instance, a: &RationalMatrix) -> Result<RationalMatrix, Gr2Error> {
    let a = inst.to_layout(a)?;
    Ok(inst.out_of_layout(&inst.column.reflection * &a))
}

/// `Psi_Q(B) = B V_hat` (each row multiplied by the symmetric `V_hat`).
pub fn psi(inst: &Gr2Instance, b: &RationalMatrix) -> Result<RationalMatrix, Gr2Error> {
    let b = inst.to_layout(b)?;
    Ok(inst.out_of_layout(&b * &inst.v_hat))
}

/// Zero on the first `r1 + n1` layout columns; the remaining columns
/// projected onto the column space of `Q`.
pub fn t_c(inst: &Gr2Instance, a: &RationalMatrix) -> Result<RationalMatrix, Gr2Error> {
    let a = inst.to_layout(a)?;
    let mut out = &inst.column.projector * &a;
    for i in 0..out.rows() {
        for j in 0..inst.split {
            out[(i, j)] = Rational::zero();
        }
    }
    Ok(inst.out_of_layout(out))
}

/// For `B` supported on the first `r1 + n1` layout columns: each row
/// projected onto the row space of `Q_[m, r1+n1]` and completed by the unique
/// tail that puts it in the row space of `Q_[r1, n]`.
pub fn t_r(inst: &Gr2Instance, b: &RationalMatrix) -> Result<RationalMatrix, Gr2Error> {
    let b = inst.to_layout(b)?;
    let (m, n) = b.shape();
    let split = inst.split;
    if (0..m).any(|i| (split..n).any(|j| !b[(i, j)].is_zero())) {
        return Err(Gr2Error::ShapeViolation(split));
    }
    let rows: Vec<usize> = (0..m).collect();
    let first: Vec<usize> = (0..split).collect();
    let v = &b.submatrix(&rows, &first) * &inst.row.projector;
    let coeffs = &v * &inst.row_coefficients.transpose();
    let top: Vec<usize> = (0..inst.params.r1).collect();
    let all: Vec<usize> = (0..n).collect();
    let full = &coeffs * &inst.layout_q.submatrix(&top, &all);
    let out = RationalMatrix::from_fn(
        m,
        n,
        |i, j| {
            if j < split {
                v[(i, j)].clone()
            } else {
                full[(i, j)].clone()
            }
        },
    );
    Ok(inst.out_of_layout(out))
}

/// Normal-space checks at `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalAction {
    /// Every normal vector has its trailing `r2 + n2` layout columns in
    /// `C(Q)^perp`, so `Phi_Q` negates them.
    pub normal_action_phi: bool,
    /// Every normal vector supported on the first `r1 + n1` layout columns
    /// is negated by `Psi_Q`.
    pub normal_action_psi: bool,
    /// `<N, t_c(N)> = 0` for every frame normal, and `<N, t_r(N)> = 0` for
    /// every normal of admissible shape.
    pub normal_tangent_orthogonal: bool,
    /// The obstruction vector vanishes at `Q`.
    pub obstruction_zero: bool,
    /// Dimension of the space of normals supported on the first block.
    pub leading_normals: usize,
    pub counterexamples: Vec<String>,
}

pub fn verify_normal_action(inst: &Gr2Instance) -> Result<NormalAction, Gr2Error> {
    let frame = normal_frame(&inst.w, &inst.q.point)?;
    normal_action_with_frame(inst, &frame)
}

fn normal_action_with_frame(inst: &Gr2Instance, frame: &NormalFrame) -> Result<NormalAction, Gr2Error> {
    let mut counterexamples = Vec::new();
    let layout: Vec<RationalMatrix> = frame
        .gradients
        .iter()
        .map(|g| if inst.params.transposed { g.transpose() } else { g.clone() })
        .collect();
    let (m, n) = inst.layout_q.shape();
    let split = inst.split;

    let mut normal_action_phi = true;
    let mut normal_tangent_orthogonal = true;
    for (k, g) in layout.iter().enumerate() {
        let projected = &inst.column.projector * g;
        if (0..m).any(|i| (split..n).any(|j| !projected[(i, j)].is_zero())) {
            normal_action_phi = false;
            counterexamples
                .push(format!("normal of f{} has a trailing column outside C(Q)^perp", frame.cells[k]));
        }
        let tc = t_c(inst, &frame.gradients[k])?;
        if !frame.gradients[k].inner(&tc).is_zero() {
            normal_tangent_orthogonal = false;
            counterexamples.push(format!("<N, t_c(N)> != 0 for f{}", frame.cells[k]));
        }
    }

    // Combinations of the frame vanishing on the trailing layout columns.
    let trailing: Vec<(usize, usize)> = (0..m).flat_map(|i| (split..n).map(move |j| (i, j))).collect();
    let constraint =
        RationalMatrix::from_fn(trailing.len(), layout.len(), |r, k| layout[k][trailing[r]].clone());
    let combos = if trailing.is_empty() {
        (0..layout.len())
            .map(|k| (0..layout.len()).map(|l| if l == k { int(1) } else { Rational::zero() }).collect())
            .collect()
    } else {
        nullspace(&constraint)
    };
    let mut normal_action_psi = true;
    for c in &combos {
        let mut nl = RationalMatrix::zeros(m, n);
        for (coef, g) in c.iter().zip(&layout) {
            if !coef.is_zero() {
                nl = &nl + &g.scale(coef);
            }
        }
        let normal = inst.out_of_layout(nl);
        if psi(inst, &normal)? != -&normal {
            normal_action_psi = false;
            counterexamples
                .push(format!("Psi_Q does not negate leading normal {:?}", normal.to_string_rows()));
        }
        let tr = t_r(inst, &normal)?;
        if !normal.inner(&tr).is_zero() {
            normal_tangent_orthogonal = false;
            counterexamples.push(format!("<N, t_r(N)> != 0 for {:?}", normal.to_string_rows()));
        }
    }

    let obstruction = obstruction_from_frame(&inst.q.point, frame)?;
    let obstruction_zero = obstruction.is_zero();
    if !obstruction_zero {
        counterexamples.push(format!("obstruction nonzero at cells {:?}", obstruction.support()));
    }
    Ok(NormalAction {
        normal_action_phi,
        normal_action_psi,
        normal_tangent_orthogonal,
        obstruction_zero,
        leading_normals: combos.len(),
        counterexamples,
    })
}

/// Sampling plan for [`verify_gr2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gr2Config {
    /// Regular points `Q` per instance.
    pub samples: usize,
    pub seed: u64,
    /// Random matrices per `Q` for each map-level check.
    pub probes: usize,
    pub entry_bound: i64,
}

impl Default for Gr2Config {
    fn default() -> Self {
        Gr2Config { samples: 20, seed: 0, probes: 3, entry_bound: DEFAULT_ENTRY_BOUND }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Gr2Checks {
    pub involution: bool,
    pub isometry: bool,
    pub fixes_q: bool,
    pub closure_phi: bool,
    pub closure_psi: bool,
    pub tangency_tc: bool,
    pub tangency_tr: bool,
    pub normal_action_phi: bool,
    pub normal_action_psi: bool,
    pub obstruction_zero: bool,
}

impl Gr2Checks {
    fn all_true() -> Self {
        Gr2Checks {
            involution: true,
            isometry: true,
            fixes_q: true,
            closure_phi: true,
            closure_psi: true,
            tangency_tc: true,
            tangency_tr: true,
            normal_action_phi: true,
            normal_action_psi: true,
            obstruction_zero: true,
        }
    }

    pub fn all(&self) -> bool {
        self.involution
            && self.isometry
            && self.fixes_q
            && self.closure_phi
            && self.closure_psi
            && self.tangency_tc
            && self.tangency_tr
            && self.normal_action_phi
            && self.normal_action_psi
            && self.obstruction_zero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gr2Report {
    pub params: Gr2Params,
    pub w: PartialPermutation,
    pub samples: usize,
    pub seed: u64,
    /// Regular points at which the obstruction vanished.
    pub stationary: usize,
    pub checks: Gr2Checks,
    pub counterexamples: Vec<String>,
}

impl Gr2Report {
    pub fn passed(&self) -> bool {
        self.checks.all()
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(m, n, |_, _| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
}

/// Runs every structural check at `config.samples` seeded regular points.
pub fn verify_gr2(params: Gr2Params, config: &Gr2Config) -> Result<Gr2Report, Gr2Error> {
    let w = params.build();
    let (m, n) = (w.rows(), w.cols());
    let mut checks = Gr2Checks::all_true();
    let mut counterexamples = Vec::new();
    let mut stationary = 0;
    let lines = line_parameters();
    let mut failures = Vec::new();
    let mut fail = |flag: &mut bool, what: String| {
        *flag = false;
        failures.push(what);
    };

    for k in 0..config.samples as u64 {
        let inst = Gr2Instance::sample(params, config.seed, k, config.entry_bound)?;
        let q = &inst.q.point;
        let tag = format!("seed {} sample {k}", config.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream((1 << 32) | k);

        if !inst.column.is_valid() || !inst.row.is_valid() {
            fail(&mut checks.involution, format!("{tag}: reflection is not an involutive isometry"));
        }
        if phi(&inst, q)? != *q || psi(&inst, q)? != *q {
            fail(&mut checks.fixes_q, format!("{tag}: Q is not fixed"));
        }

        for j in 0..config.probes {
            let a1 = random_matrix(&mut rng, m, n);
            let a2 = random_matrix(&mut rng, m, n);
            if phi(&inst, &phi(&inst, &a1)?)? != a1 || psi(&inst, &psi(&inst, &a1)?)? != a1 {
                fail(
                    &mut checks.involution,
                    format!("{tag}: not an involution on {:?}", a1.to_string_rows()),
                );
            }
            let ip = a1.inner(&a2);
            if phi(&inst, &a1)?.inner(&phi(&inst, &a2)?) != ip
                || psi(&inst, &a1)?.inner(&psi(&inst, &a2)?) != ip
            {
                fail(&mut checks.isometry, format!("{tag}: inner product not preserved"));
            }

            let index = k * config.probes as u64 + j as u64;
            let x = sample_regular_indexed(&w, config.seed.wrapping_add(1), index, config.entry_bound)?.point;
            if !contains_closure(&w, &phi(&inst, &x)?)? {
                fail(
                    &mut checks.closure_phi,
                    format!("{tag}: Phi_Q(A) leaves the closure for A = {:?}", x.to_string_rows()),
                );
            }
            if !contains_closure(&w, &psi(&inst, &x)?)? {
                fail(
                    &mut checks.closure_psi,
                    format!("{tag}: Psi_Q(B) leaves the closure for B = {:?}", x.to_string_rows()),
                );
            }

            let tc = t_c(&inst, &a1)?;
            let b = leading_block(&inst, &a2);
            let tr = t_r(&inst, &b)?;
            for s in &lines {
                if !contains_closure(&w, &(q + &tc.scale(s)))? {
                    fail(&mut checks.tangency_tc, format!("{tag}: Q + {s} t_c(A) leaves the closure"));
                }
                if !contains_closure(&w, &(q + &tr.scale(s)))? {
                    fail(&mut checks.tangency_tr, format!("{tag}: Q + {s} t_r(B) leaves the closure"));
                }
            }
        }

        let frame = normal_frame(&w, q)?;
        let action = normal_action_with_frame(&inst, &frame)?;
        if !action.normal_action_phi {
            checks.normal_action_phi = false;
        }
        if !action.normal_action_psi {
            checks.normal_action_psi = false;
        }
        if !action.normal_tangent_orthogonal {
            checks.tangency_tc = false;
            checks.tangency_tr = false;
        }
        if action.obstruction_zero {
            stationary += 1;
        } else {
            checks.obstruction_zero = false;
        }
        counterexamples.extend(action.counterexamples.into_iter().map(|c| format!("{tag}: {c}")));
    }
    counterexamples.extend(failures);

    Ok(Gr2Report {
        params,
        w,
        samples: config.samples,
        seed: config.seed,
        stationary,
        checks,
        counterexamples,
    })
}

/// `a` with every layout column past `r1 + n1` zeroed.
fn leading_block(inst: &Gr2Instance, a: &RationalMatrix) -> RationalMatrix {
    let mut b = if inst.params.transposed { a.transpose() } else { a.clone() };
    for i in 0..b.rows() {
        for j in inst.split..b.cols() {
            b[(i, j)] = Rational::zero();
        }
    }
    inst.out_of_layout(b)
}
