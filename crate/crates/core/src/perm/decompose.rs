use serde::Serialize;

use super::classify::Gr2Params;
use super::diagram::{is_vexillary_pattern, RotheDiagram};
use super::partial::PartialPermutation;
use super::PermError;
use crate::cell::Cell;

/// One factor of the product decomposition: `w` restricted to a block of
/// rows and columns, together with the diagram components it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub w: PartialPermutation,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Indices into the parent diagram's component list.
    pub components: Vec<usize>,
    pub in_gr2_tilde: bool,
}

impl Factor {
    /// Global position of a local (1-based) factor coordinate.
    pub fn global(&self, local: Cell) -> Cell {
        Cell::new(self.rows[local.row - 1], self.cols[local.col - 1])
    }

    pub fn coordinates(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().flat_map(move |&r| self.cols.iter().map(move |&c| Cell::new(r, c)))
    }
}

/// `X_w` as (zero subspace) x (product of factor varieties) x `R^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub m: usize,
    pub n: usize,
    /// The component containing `(1,1)`: coordinates forced to vanish.
    pub zero_cells: Vec<Cell>,
    pub factors: Vec<Factor>,
    /// Coordinates appearing in no defining equation.
    pub free: Vec<Cell>,
}

impl Decomposition {
    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Which part a global coordinate belongs to.
    pub fn locate(&self, cell: Cell) -> Placement {
        if self.zero_cells.binary_search(&cell).is_ok() {
            return Placement::Zero;
        }
        for (k, f) in self.factors.iter().enumerate() {
            if let (Some(a), Some(b)) =
                (f.rows.iter().position(|&r| r == cell.row), f.cols.iter().position(|&c| c == cell.col))
            {
                return Placement::Factor { factor: k, local: Cell::new(a + 1, b + 1) };
            }
        }
        Placement::Free
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Zero,
    Factor { factor: usize, local: Cell },
    Free,
}

/// Splits a vexillary `w` with `(1,1)` in its diagram into its zero block,
/// its factors and the free coordinates.
///
/// Every component other than the one through `(1,1)` spans the block
/// `(R(K) ∪ rows(K)) x (C(K) ∪ cols(K))`; blocks sharing a row or a column are
/// merged into one factor.
pub fn decompose(w: &PartialPermutation) -> Result<Decomposition, PermError> {
    if !is_vexillary_pattern(w) {
        return Err(PermError::NotVexillary);
    }
    let d = RotheDiagram::new(w);
    let Some(zero_id) = d.component_of(Cell::new(1, 1)) else {
        return Err(PermError::TopLeftNotInDiagram);
    };
    let comps = d.components();

    let mut blocks: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = comps
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != zero_id)
        .map(|(k, c)| (union(&c.rows, &c.cell_rows()), union(&c.cols, &c.cell_cols()), vec![k]))
        .collect();
    loop {
        let pair = (0..blocks.len()).find_map(|a| {
            (a + 1..blocks.len())
                .find(|&b| overlaps(&blocks[a].0, &blocks[b].0) || overlaps(&blocks[a].1, &blocks[b].1))
                .map(|b| (a, b))
        });
        let Some((a, b)) = pair else { break };
        let (rb, cb, kb) = blocks.remove(b);
        let (ra, ca, ka) = &mut blocks[a];
        *ra = union(ra, &rb);
        *ca = union(ca, &cb);
        ka.extend(kb);
        ka.sort_unstable();
    }

    let factors: Vec<Factor> = blocks
        .into_iter()
        .map(|(rows, cols, components)| {
            let fw = w.restrict(&rows, &cols);
            let in_gr2_tilde = Gr2Params::from_shape(&RotheDiagram::new(&fw)).is_some();
            Factor { w: fw, rows, cols, components, in_gr2_tilde }
        })
        .collect();

    let zero_cells = comps[zero_id].cells.clone();
    let mut dec = Decomposition { m: w.rows(), n: w.cols(), zero_cells, factors, free: Vec::new() };
    for i in 1..=dec.m {
        for j in 1..=dec.n {
            let c = Cell::new(i, j);
            if dec.locate(c) == Placement::Free {
                if d.dominates(c) {
                    return Err(PermError::Unclassified(c));
                }
                dec.free.push(c);
            }
        }
    }
    Ok(dec)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn overlaps(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|x| b.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_one_by_one() {
        let dec = decompose(&PartialPermutation::zero(1, 1)).unwrap();
        assert_eq!(dec.zero_cells, vec![Cell::new(1, 1)]);
        assert!(dec.factors.is_empty());
        assert_eq!(dec.free_count(), 0);
    }

    #[test]
    fn preconditions() {
        let nonvex = PartialPermutation::parse("0 1 0 / 1 0 0 / 0 0 0").unwrap();
        assert_eq!(decompose(&nonvex), Err(PermError::NotVexillary));
        assert_eq!(decompose(&PartialPermutation::identity(2)), Err(PermError::TopLeftNotInDiagram));
    }

    #[test]
    fn small_example_factor() {
        let w = PartialPermutation::parse("0 1 0 / 0 0 0 / 1 0 0").unwrap();
        let dec = decompose(&w).unwrap();
        assert_eq!(dec.zero_cells, vec![Cell::new(1, 1), Cell::new(2, 1)]);
        assert_eq!(dec.factors.len(), 1);
        let f = &dec.factors[0];
        assert_eq!((f.rows.clone(), f.cols.clone()), (vec![1, 2], vec![2, 3]));
        assert_eq!(f.w, PartialPermutation::parse("1 0 / 0 0").unwrap());
        assert!(f.in_gr2_tilde);
        assert_eq!(dec.free.len(), 3);
    }
}
