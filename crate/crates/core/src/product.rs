//! Regular points of decomposable varieties assembled from their factors,
//! and the check that the composite obstruction is the concatenation of the
//! factor obstructions.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cell::Cell;
use crate::linalg::{int, Rational, RationalMatrix};
use crate::perm::{Decomposition, PartialPermutation, Placement, RotheDiagram};
use crate::variety::{
    contains_regular, normal_frame, obstruction_from_frame, sample_regular_indexed, ObstructionVector,
    VarietyError,
};

const MAX_DRAWS: usize = 1000;

/// The point with the factor blocks in place, zeros on the zero block and
/// the given values on the free coordinates (in `dec.free` order).
pub fn assemble_point(
    dec: &Decomposition,
    factor_points: &[RationalMatrix],
    free_values: &[Rational],
) -> Result<RationalMatrix, VarietyError> {
    if factor_points.len() != dec.factors.len() || free_values.len() != dec.free.len() {
        return Err(VarietyError::DimensionMismatch("factor points or free values".into()));
    }
    let mut a = RationalMatrix::zeros(dec.m, dec.n);
    for (f, p) in dec.factors.iter().zip(factor_points) {
        if p.shape() != (f.rows.len(), f.cols.len()) {
            return Err(VarietyError::DimensionMismatch("factor block".into()));
        }
        for (i, &r) in f.rows.iter().enumerate() {
            for (j, &c) in f.cols.iter().enumerate() {
                a[(r - 1, c - 1)] = p[(i, j)].clone();
            }
        }
    }
    for (cell, v) in dec.free.iter().zip(free_values) {
        a[(cell.row - 1, cell.col - 1)] = v.clone();
    }
    Ok(a)
}

/// One assembled sample and its checks.
#[derive(Clone, Debug, Serialize)]
pub struct CompositeSample {
    pub index: u64,
    pub regular: bool,
    /// The composite diagram is the zero block plus the embedded factor diagrams.
    pub frame_matches: bool,
    pub obstruction_zero: bool,
    /// Every composite trace equals the trace of the matching factor cell;
    /// zero-block traces vanish.
    pub concatenates: bool,
    pub obstruction: ObstructionVector,
}

impl CompositeSample {
    pub fn passed(&self) -> bool {
        self.regular && self.frame_matches && self.obstruction_zero && self.concatenates
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositeReport {
    pub seed: u64,
    pub samples: Vec<CompositeSample>,
    pub stationary: usize,
}

impl CompositeReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(CompositeSample::passed)
    }
}

/// Sample `index` of the seeded composite stream: factor `k` is drawn from
/// seed `seed + k + 1`, free coordinates from seed `seed`, all at stream
/// `index`.
///
/// Only generic free values give a regular point of `X_w` (they must not
/// drop an upper-left rank), so free draws are repeated until the assembled
/// point is regular.
pub fn sample_composite(
    w: &PartialPermutation,
    dec: &Decomposition,
    seed: u64,
    index: u64,
    entry_bound: i64,
) -> Result<(RationalMatrix, Vec<RationalMatrix>), VarietyError> {
    let factor_points = dec
        .factors
        .iter()
        .enumerate()
        .map(|(k, f)| {
            sample_regular_indexed(&f.w, seed.wrapping_add(k as u64 + 1), index, entry_bound).map(|p| p.point)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    for _ in 0..MAX_DRAWS {
        let free: Vec<Rational> =
            dec.free.iter().map(|_| int(rng.gen_range(-entry_bound..=entry_bound))).collect();
        let a = assemble_point(dec, &factor_points, &free)?;
        if contains_regular(w, &a)? {
            return Ok((a, factor_points));
        }
    }
    Err(VarietyError::SamplingFailure(MAX_DRAWS))
}

/// Checks `samples` assembled points of a decomposable `w`.
pub fn verify_composite(
    w: &PartialPermutation,
    dec: &Decomposition,
    seed: u64,
    samples: usize,
    entry_bound: i64,
) -> Result<CompositeReport, VarietyError> {
    let mut expected_cells: Vec<Cell> = dec.zero_cells.clone();
    for f in &dec.factors {
        expected_cells.extend(RotheDiagram::new(&f.w).cells().iter().map(|&c| f.global(c)));
    }
    expected_cells.sort_unstable();

    let mut out = Vec::with_capacity(samples);
    for index in 0..samples as u64 {
        let (a, factor_points) = sample_composite(w, dec, seed, index, entry_bound)?;
        if !contains_regular(w, &a)? {
            out.push(CompositeSample {
                index,
                regular: false,
                frame_matches: false,
                obstruction_zero: false,
                concatenates: false,
                obstruction: ObstructionVector { per_cell: Vec::new() },
            });
            continue;
        }
        let frame = normal_frame(w, &a)?;
        let obstruction = obstruction_from_frame(&a, &frame)?;
        let mut factor_obstructions = Vec::with_capacity(dec.factors.len());
        for (f, p) in dec.factors.iter().zip(&factor_points) {
            factor_obstructions.push(obstruction_from_frame(p, &normal_frame(&f.w, p)?)?);
        }
        let concatenates = obstruction.per_cell.iter().all(|(cell, trace)| match dec.locate(*cell) {
            Placement::Zero => trace.is_zero(),
            Placement::Factor { factor, local } => factor_obstructions[factor].get(local) == Some(trace),
            Placement::Free => false,
        });
        out.push(CompositeSample {
            index,
            regular: true,
            frame_matches: frame.cells == expected_cells,
            obstruction_zero: obstruction.is_zero(),
            concatenates,
            obstruction,
        });
    }
    let stationary = out.iter().filter(|s| s.obstruction_zero).count();
    Ok(CompositeReport { seed, samples: out, stationary })
}
