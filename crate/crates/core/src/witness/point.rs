use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::sigma::{build_sigma_hat, check_parameters, cofactor_table, minor_case, SigmaHat};
use super::WitnessError;
use crate::cell::Cell;
use crate::linalg::{det, gram, int, minor_second_partials, Rational, RationalMatrix};
use crate::perm::{PartialPermutation, Permutation, RotheDiagram};
use crate::variety::{contains_regular, normal_frame, obstruction_from_frame, NormalFrame};

/// A diagram cell whose restriction `w|_{R x C}` has rank at least two and is
/// not the identity, chosen with `row + col` minimal (ties lexicographic).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCell {
    pub cell: Cell,
    /// `R(cell) = {r_1 < ... < r_k}`.
    pub rows: Vec<usize>,
    /// `C(cell) = {c_1 < ... < c_k}`.
    pub cols: Vec<usize>,
    /// `w|_{R x C}` as an element of `S_k`: `perm(s) = t` iff `w` has a 1 at
    /// `(r_s, c_t)`.
    pub perm: Permutation,
    /// First descent `L` of `perm`.
    pub descent: usize,
    /// `det(perm)`.
    pub delta: i64,
}

impl WitnessCell {
    fn r(&self, s: usize) -> usize {
        self.rows[s - 1]
    }

    fn c(&self, t: usize) -> usize {
        self.cols[t - 1]
    }

    /// `(r_L, c_{perm(L+1)})`, the only other cell whose gradient the Hessian
    /// of `f_cell` pairs nontrivially with `grad f_cell`.
    pub fn partner(&self) -> Cell {
        let l = self.descent;
        Cell::new(self.r(l), self.c(self.perm.apply(l + 1)))
    }

    /// Rows `R ∪ {alpha}` of the minor `f_cell`.
    pub fn minor_rows(&self) -> Vec<usize> {
        let mut v = self.rows.clone();
        v.push(self.cell.row);
        v
    }

    /// Columns `C ∪ {beta}` of the minor `f_cell`.
    pub fn minor_cols(&self) -> Vec<usize> {
        let mut v = self.cols.clone();
        v.push(self.cell.col);
        v
    }

    /// Global position of a position of `sigma_hat`.
    fn global(&self, local: Cell) -> Cell {
        Cell::new(self.minor_rows()[local.row - 1], self.minor_cols()[local.col - 1])
    }
}

pub fn select_witness_cell(w: &PartialPermutation) -> Result<WitnessCell, WitnessError> {
    let d = RotheDiagram::new(w);
    let best = d
        .cells()
        .iter()
        .filter_map(|&c| d.rc_sets(c).map(|rc| (c, rc)))
        .filter(|(_, rc)| {
            rc.rows.len() >= 2 && !rc.rows.iter().zip(&rc.cols).all(|(&r, &col)| w.one_in_row(r) == Some(col))
        })
        .min_by_key(|(c, _)| (c.row + c.col, *c));
    let Some((cell, rc)) = best else {
        return Err(WitnessError::VexillaryInput);
    };
    let image = rc
        .rows
        .iter()
        .map(|&r| {
            let col = w.one_in_row(r).expect("rows of R carry a 1");
            1 + rc.cols.iter().position(|&c| c == col).expect("the 1 lies in C")
        })
        .collect();
    let perm = Permutation::new(image).expect("restriction is a permutation matrix");
    let descent = perm.first_descent().expect("restriction is not the identity");
    Ok(WitnessCell { cell, rows: rc.rows.clone(), cols: rc.cols.clone(), delta: perm.sign(), perm, descent })
}

/// The perturbation of `w` at a witness cell, together with the data it was
/// built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPoint {
    pub cell: WitnessCell,
    pub y: [Rational; 3],
    pub point: RationalMatrix,
    /// `sigma_hat` of the restricted permutation; equals the restriction of
    /// `point` to `(R ∪ {alpha}) x (C ∪ {beta})`.
    pub sigma_hat: SigmaHat,
}

/// `w + y1 E_{r_L,beta} + y2 E_{alpha,c_{perm(L)}} + y1 y2 E_{alpha,beta} + y3 E_{r_{L+1},c_{perm(L)}}`.
pub fn build_witness_point(
    w: &PartialPermutation,
    wc: &WitnessCell,
    y: &[Rational; 3],
) -> Result<WitnessPoint, WitnessError> {
    check_parameters(y)?;
    let [y1, y2, y3] = y;
    let l = wc.descent;
    let (alpha, beta) = (wc.cell.row, wc.cell.col);
    let cl = wc.c(wc.perm.apply(l));
    let mut a = w.to_matrix();
    a[Cell::new(wc.r(l), beta).index()] += y1;
    a[Cell::new(alpha, cl).index()] += y2;
    a[Cell::new(alpha, beta).index()] += y1 * y2;
    a[Cell::new(wc.r(l + 1), cl).index()] += y3;
    let sigma_hat = build_sigma_hat(&wc.perm, y)?;
    Ok(WitnessPoint { cell: wc.clone(), y: y.clone(), point: a, sigma_hat })
}

/// Exact structure of `Hess f_cell` against the normal frame at a witness
/// point. Every flag is expected to be `true`; `violations` explains any that
/// are not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HessianStructure {
    pub cell: Cell,
    pub partner: Cell,
    /// The restriction of the point to the minor's rows and columns is
    /// `sigma_hat`.
    pub restriction_is_sigma_hat: bool,
    /// `grad f_cell` is the transported six-entry cofactor table.
    pub gradient_pattern: bool,
    /// Nonzero second partials of `f_cell` are exactly the transported
    /// complementary-minor families, with the predicted magnitudes.
    pub second_partial_pattern: bool,
    /// First derivatives of the other `f_(i,j)` in the block `a <= alpha,
    /// b <= beta` vanish except at `(i,j)` and, for `j = beta` with
    /// `r_L < i < r_{L+1}`, at `(i, c_{perm(L)})`.
    pub first_derivative_pattern: bool,
    /// `Hess f_cell (grad f_e1, grad f_e2) = 0` for all other cells.
    pub off_cell_pairs_vanish: bool,
    /// `Hess f_cell (grad f_cell, grad f_e)` is nonzero only at the partner,
    /// with absolute value `|y3|`.
    pub cross_pattern: bool,
    #[serde(with = "crate::linalg::serde_rational")]
    pub cross_term: Rational,
    /// `Hess f_cell (grad f_cell, grad f_cell) = 0`.
    pub diagonal_vanishes: bool,
    /// `grad f_partner = E_partner`.
    pub partner_gradient_is_unit: bool,
    /// `{grad f_partner, grad f_cell}` is orthogonal to every other gradient.
    pub gram_block_diagonal: bool,
    pub violations: Vec<String>,
}

impl HessianStructure {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Partials = Vec<(Cell, Cell, Rational)>;

/// `sum v * V[c1] * W[c2]` over the nonzero second partials.
fn hessian_pairing(partials: &Partials, v: &RationalMatrix, w: &RationalMatrix) -> Rational {
    let mut total = Rational::zero();
    for (c1, c2, h) in partials {
        let (a, b) = (v.at(*c1), w.at(*c2));
        if !a.is_zero() && !b.is_zero() {
            total += h * a * b;
        }
    }
    total
}

pub fn verify_hessian_structure(
    w: &PartialPermutation,
    wp: &WitnessPoint,
) -> Result<HessianStructure, WitnessError> {
    let frame = normal_frame(w, &wp.point)?;
    structure_from_frame(wp, &frame)
}

fn structure_from_frame(wp: &WitnessPoint, frame: &NormalFrame) -> Result<HessianStructure, WitnessError> {
    let wc = &wp.cell;
    let cell = wc.cell;
    let partner = wc.partner();
    let a = &wp.point;
    let mut violations = Vec::new();

    let k0 = frame.index_of(cell).ok_or_else(|| missing(cell))?;
    let kp = frame.index_of(partner).ok_or_else(|| missing(partner))?;
    let grad = &frame.gradients[k0];
    let partials = minor_second_partials(a, &frame.minors[k0])?;

    let to_idx = |v: &[usize]| v.iter().map(|x| x - 1).collect::<Vec<_>>();
    let restriction_is_sigma_hat =
        a.submatrix(&to_idx(&wc.minor_rows()), &to_idx(&wc.minor_cols())) == wp.sigma_hat.matrix;
    if !restriction_is_sigma_hat {
        violations.push("restriction of the point differs from sigma_hat".into());
    }

    let mut expected = RationalMatrix::zeros(a.rows(), a.cols());
    for (local, v) in cofactor_table(&wp.sigma_hat) {
        expected[wc.global(local).index()] = v;
    }
    let gradient_pattern = *grad == expected;
    if !gradient_pattern {
        violations.push(format!("gradient of f{cell} differs from the cofactor table"));
    }

    let second_partial_pattern = check_second_partials(wp, &partials, &mut violations);
    let first_derivative_pattern = check_first_derivatives(wp, frame, &mut violations);

    let mut off_cell_pairs_vanish = true;
    for (i, gi) in frame.gradients.iter().enumerate() {
        if i == k0 {
            continue;
        }
        for (j, gj) in frame.gradients.iter().enumerate() {
            if j == k0 {
                continue;
            }
            let h = hessian_pairing(&partials, gi, gj);
            if !h.is_zero() {
                off_cell_pairs_vanish = false;
                violations.push(format!(
                    "Hess f{cell} pairs grad f{} and grad f{} to {h}",
                    frame.cells[i], frame.cells[j]
                ));
            }
        }
    }

    let mut cross_pattern = true;
    let mut cross_term = Rational::zero();
    for (j, gj) in frame.gradients.iter().enumerate() {
        if j == k0 {
            continue;
        }
        let h = hessian_pairing(&partials, grad, gj);
        if j == kp {
            if h.abs() != wp.y[2].abs() {
                cross_pattern = false;
                violations.push(format!("cross term at partner {partner} is {h}, expected ±{}", wp.y[2]));
            }
            cross_term = h;
        } else if !h.is_zero() {
            cross_pattern = false;
            violations.push(format!("cross term at {} is {h}, expected 0", frame.cells[j]));
        }
    }

    let diagonal = hessian_pairing(&partials, grad, grad);
    let diagonal_vanishes = diagonal.is_zero();
    if !diagonal_vanishes {
        violations.push(format!("diagonal term is {diagonal}"));
    }

    let partner_gradient_is_unit = frame.gradients[kp] == RationalMatrix::unit(a.rows(), a.cols(), partner);
    if !partner_gradient_is_unit {
        violations.push(format!("gradient of f{partner} is not a unit matrix"));
    }

    let mut gram_block_diagonal = true;
    for b1 in [k0, kp] {
        for b2 in 0..frame.len() {
            if b2 != k0 && b2 != kp && !frame.gram[(b1, b2)].is_zero() {
                gram_block_diagonal = false;
                violations.push(format!(
                    "gradients of f{} and f{} are not orthogonal",
                    frame.cells[b1], frame.cells[b2]
                ));
            }
        }
    }

    Ok(HessianStructure {
        cell,
        partner,
        restriction_is_sigma_hat,
        gradient_pattern,
        second_partial_pattern,
        first_derivative_pattern,
        off_cell_pairs_vanish,
        cross_pattern,
        cross_term,
        diagonal_vanishes,
        partner_gradient_is_unit,
        gram_block_diagonal,
        violations,
    })
}

fn missing(c: Cell) -> WitnessError {
    WitnessError::StructureViolation(format!("{c} is not a diagram cell"))
}

/// Every ordered pair of positions of `sigma_hat` in distinct rows and
/// columns: the second partial's magnitude must match the minor family.
fn check_second_partials(wp: &WitnessPoint, partials: &Partials, violations: &mut Vec<String>) -> bool {
    let wc = &wp.cell;
    let by_pair: HashMap<(Cell, Cell), &Rational> =
        partials.iter().map(|(c1, c2, v)| ((*c1, *c2), v)).collect();
    let n1 = wp.sigma_hat.size();
    let mut ok = true;
    for i1 in 1..=n1 {
        for i2 in i1 + 1..=n1 {
            for j1 in 1..=n1 {
                for j2 in 1..=n1 {
                    if j1 == j2 {
                        continue;
                    }
                    let g1 = wc.global(Cell::new(i1, j1));
                    let g2 = wc.global(Cell::new(i2, j2));
                    let actual = by_pair.get(&(g1, g2)).map(|v| v.abs()).unwrap_or_else(Rational::zero);
                    let predicted = minor_case(&wp.sigma_hat, (i1, i2), (j1, j2))
                        .map(|c| c.magnitude)
                        .unwrap_or_else(Rational::zero);
                    if actual != predicted {
                        ok = false;
                        violations.push(format!(
                            "second partial at {g1},{g2} has magnitude {actual}, expected {predicted}"
                        ));
                    }
                }
            }
        }
    }
    ok
}

fn check_first_derivatives(wp: &WitnessPoint, frame: &NormalFrame, violations: &mut Vec<String>) -> bool {
    let wc = &wp.cell;
    let (alpha, beta) = (wc.cell.row, wc.cell.col);
    let l = wc.descent;
    let (rl, rl1) = (wc.r(l), wc.r(l + 1));
    let cl = wc.c(wc.perm.apply(l));
    let mut ok = true;
    for (k, &e) in frame.cells.iter().enumerate() {
        if e == wc.cell {
            continue;
        }
        let g = &frame.gradients[k];
        for a in 1..=alpha {
            for b in 1..=beta {
                let at = Cell::new(a, b);
                let expect =
                    at == e || (e.col == beta && rl < e.row && e.row < rl1 && at == Cell::new(e.row, cl));
                if g.at(at).is_zero() == expect {
                    ok = false;
                    violations.push(format!(
                        "d f{e} / d x{at} is {}, expected {}",
                        g.at(at),
                        if expect { "nonzero" } else { "zero" }
                    ));
                }
            }
        }
    }
    ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChecks {
    /// The point is a regular point of `X_w`.
    pub membership: bool,
    /// Every flag of the [`HessianStructure`] report holds.
    pub hessian_structure: bool,
    pub gram_block_diagonal: bool,
    pub trace_nonzero: bool,
    /// `|trace| * det(G1) = |2 y1 y2 y3^2|`.
    pub magnitude_identity: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.membership
            && self.hessian_structure
            && self.gram_block_diagonal
            && self.trace_nonzero
            && self.magnitude_identity
    }
}

/// A checkable record that the mean curvature of `X_w` is nonzero at `point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCertificate {
    pub cell: Cell,
    pub restricted_perm: Permutation,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(rename = "L")]
    pub descent: usize,
    pub delta: i64,
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub y: Vec<Rational>,
    pub point: RationalMatrix,
    pub partner: Cell,
    /// `Hess f_cell (grad f_cell, grad f_partner)`, signed as computed.
    #[serde(with = "crate::linalg::serde_rational")]
    pub cross_term: Rational,
    /// Normal-space trace of `Hess f_cell`.
    #[serde(with = "crate::linalg::serde_rational")]
    pub numeric_trace: Rational,
    /// Determinant of the Gram matrix of `grad f_partner`, `grad f_cell`.
    #[serde(with = "crate::linalg::serde_rational")]
    pub gram_block_det: Rational,
    pub checks: CertificateChecks,
    pub violations: Vec<String>,
}

impl WitnessCertificate {
    /// `Ok` if every check passed, otherwise a [`WitnessError::StructureViolation`]
    /// listing what failed.
    pub fn ensure(&self) -> Result<(), WitnessError> {
        if self.checks.all() {
            return Ok(());
        }
        let mut why = self.violations.clone();
        if !self.checks.membership {
            why.push("point is not a regular point".into());
        }
        if !self.checks.trace_nonzero {
            why.push("trace vanishes".into());
        }
        if !self.checks.magnitude_identity {
            why.push("|trace| * det(G1) != |2 y1 y2 y3^2|".into());
        }
        Err(WitnessError::StructureViolation(why.join("; ")))
    }
}

/// Builds the witness point for a non-vexillary `w` and evaluates every
/// check. Failed checks are reported in the certificate, not as errors.
pub fn certify_nonminimal(
    w: &PartialPermutation,
    y: &[Rational; 3],
) -> Result<WitnessCertificate, WitnessError> {
    check_parameters(y)?;
    let wc = select_witness_cell(w)?;
    let wp = build_witness_point(w, &wc, y)?;
    let membership = contains_regular(w, &wp.point)?;
    let frame = normal_frame(w, &wp.point)?;
    let structure = structure_from_frame(&wp, &frame)?;
    let traces = obstruction_from_frame(&wp.point, &frame)?;
    let numeric_trace = traces.get(wc.cell).cloned().ok_or_else(|| missing(wc.cell))?;

    let partner = wc.partner();
    let kp = frame.index_of(partner).ok_or_else(|| missing(partner))?;
    let k0 = frame.index_of(wc.cell).ok_or_else(|| missing(wc.cell))?;
    let g1 = gram(&[frame.gradients[kp].clone(), frame.gradients[k0].clone()])?;
    let gram_block_det = det(&g1)?;

    let [y1, y2, y3] = y;
    let target = (int(2) * y1 * y2 * y3 * y3).abs();
    let checks = CertificateChecks {
        membership,
        hessian_structure: structure.passed(),
        gram_block_diagonal: structure.gram_block_diagonal,
        trace_nonzero: !numeric_trace.is_zero(),
        magnitude_identity: numeric_trace.abs() * &gram_block_det == target,
    };
    Ok(WitnessCertificate {
        cell: wc.cell,
        restricted_perm: wc.perm.clone(),
        rows: wc.rows.clone(),
        cols: wc.cols.clone(),
        descent: wc.descent,
        delta: wc.delta,
        y: y.to_vec(),
        point: wp.point,
        partner,
        cross_term: structure.cross_term,
        numeric_trace,
        gram_block_det,
        checks,
        violations: structure.violations,
    })
}
