use std::collections::VecDeque;

use serde::Serialize;

use super::partial::PartialPermutation;
use crate::cell::Cell;
use crate::linalg::IndexedMinor;

/// The row and column index sets attached to a diagram cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcSets {
    pub cell: Cell,
    /// Rows `r < i` whose 1 lies in a column `< j`.
    pub rows: Vec<usize>,
    /// Columns `c < j` whose 1 lies in a row `< i`.
    pub cols: Vec<usize>,
}

/// A connected component of the diagram, with its (shared) R/C sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub cells: Vec<Cell>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Component {
    pub fn top(&self) -> usize {
        self.cells.iter().map(|c| c.row).min().expect("nonempty component")
    }

    pub fn bottom(&self) -> usize {
        self.cells.iter().map(|c| c.row).max().expect("nonempty component")
    }

    pub fn left(&self) -> usize {
        self.cells.iter().map(|c| c.col).min().expect("nonempty component")
    }

    pub fn right(&self) -> usize {
        self.cells.iter().map(|c| c.col).max().expect("nonempty component")
    }

    /// Whether the cells fill their bounding box.
    pub fn is_rectangle(&self) -> bool {
        let area = (self.bottom() - self.top() + 1) * (self.right() - self.left() + 1);
        area == self.cells.len()
    }

    /// Rows occupied by cells, ascending.
    pub fn cell_rows(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.cells.iter().map(|c| c.row).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn cell_cols(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.cells.iter().map(|c| c.col).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// `D(w) = {(i,j) : w~(i) > j and w~^{-1}(j) > i}` together with its
/// components, rank table and R/C sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotheDiagram {
    m: usize,
    n: usize,
    cells: Vec<Cell>,
    components: Vec<Component>,
    /// `rank_table[p-1][q-1] = rk(w_[p,q])`.
    rank_table: Vec<Vec<usize>>,
    rc_sets: Vec<RcSets>,
}

impl RotheDiagram {
    pub fn new(w: &PartialPermutation) -> Self {
        let (m, n) = (w.rows(), w.cols());
        let ext = w.extend();
        let inv = ext.inverse();
        // The diagram of the extension never leaves the m x n block, so only
        // that block is scanned.
        let mut cells = Vec::new();
        for i in 1..=m {
            for j in 1..=n {
                if ext.apply(i) > j && inv.apply(j) > i {
                    cells.push(Cell::new(i, j));
                }
            }
        }
        let rank_table: Vec<Vec<usize>> =
            (1..=m).map(|p| (1..=n).map(|q| w.rank_at(p, q)).collect()).collect();
        let rc_sets = cells.iter().map(|&c| rc_sets_of(w, c)).collect::<Vec<_>>();

        let mut label = vec![usize::MAX; cells.len()];
        let mut grid = vec![vec![None; n + 2]; m + 2];
        for (k, c) in cells.iter().enumerate() {
            grid[c.row][c.col] = Some(k);
        }
        let mut components = Vec::new();
        for start in 0..cells.len() {
            if label[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            label[start] = id;
            while let Some(k) = queue.pop_front() {
                members.push(cells[k]);
                let Cell { row, col } = cells[k];
                for (r, c) in [(row - 1, col), (row + 1, col), (row, col - 1), (row, col + 1)] {
                    if let Some(nb) = grid[r][c] {
                        if label[nb] == usize::MAX {
                            label[nb] = id;
                            queue.push_back(nb);
                        }
                    }
                }
            }
            members.sort();
            let first = cells.iter().position(|c| *c == members[0]).expect("member");
            components.push(Component {
                cells: members,
                rows: rc_sets[first].rows.clone(),
                cols: rc_sets[first].cols.clone(),
            });
        }
        RotheDiagram { m, n, cells, components, rank_table, rc_sets }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Cells in lexicographic order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Components ordered by their lexicographically smallest cell.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, cell: Cell) -> Option<usize> {
        self.components.iter().position(|k| k.cells.binary_search(&cell).is_ok())
    }

    /// `rk(w_[p,q])`, 1-based.
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.rank_table[p - 1][q - 1]
    }

    pub fn rank_table(&self) -> &[Vec<usize>] {
        &self.rank_table
    }

    pub fn rc_sets(&self, cell: Cell) -> Option<&RcSets> {
        self.cells.binary_search(&cell).ok().map(|k| &self.rc_sets[k])
    }

    /// The minor `f_cell` on rows `R ∪ {α}` and columns `C ∪ {β}`.
    pub fn minor(&self, cell: Cell) -> Option<IndexedMinor> {
        let rc = self.rc_sets(cell)?;
        let mut rows = rc.rows.clone();
        let mut cols = rc.cols.clone();
        rows.push(cell.row);
        cols.push(cell.col);
        Some(IndexedMinor::new(rows, cols).expect("R < α and C < β"))
    }

    /// Whether `coord` lies weakly above and left of some diagram cell, i.e.
    /// the coordinate can occur in one of the defining minors.
    pub fn dominates(&self, coord: Cell) -> bool {
        self.cells.iter().any(|&c| coord.dominated_by(c))
    }
}

fn rc_sets_of(w: &PartialPermutation, cell: Cell) -> RcSets {
    let rows = (1..cell.row).filter(|&r| w.one_in_row(r).is_some_and(|c| c < cell.col)).collect();
    let cols = (1..cell.col).filter(|&c| w.one_in_col(c).is_some_and(|r| r < cell.row)).collect();
    RcSets { cell, rows, cols }
}

/// Pattern test on the extension: no `i1 < i2 < i3 < i4` with
/// `w(i2) < w(i1) < w(i4) < w(i3)`.
pub fn is_vexillary_pattern(w: &PartialPermutation) -> bool {
    let p = w.extend();
    let v = p.image();
    let n = v.len();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            if v[i2] >= v[i1] {
                continue;
            }
            for i3 in i2 + 1..n {
                if v[i3] <= v[i1] {
                    continue;
                }
                for i4 in i3 + 1..n {
                    if v[i1] < v[i4] && v[i4] < v[i3] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Restriction test: `w` restricted to `R(i,j) x C(i,j)` is the identity for
/// every diagram cell.
pub fn is_vexillary_restriction(w: &PartialPermutation) -> bool {
    let d = RotheDiagram::new(w);
    d.rc_sets.iter().all(|rc| restriction_is_identity(w, rc))
}

pub(crate) fn restriction_is_identity(w: &PartialPermutation, rc: &RcSets) -> bool {
    rc.rows.iter().zip(&rc.cols).all(|(&r, &c)| w.one_in_row(r) == Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(v: &[(usize, usize)]) -> Vec<Cell> {
        v.iter().map(|&c| c.into()).collect()
    }

    #[test]
    fn small_example() {
        let w = PartialPermutation::parse("0 1 0 / 0 0 0 / 1 0 0").unwrap();
        let d = RotheDiagram::new(&w);
        assert_eq!(d.cells(), cells(&[(1, 1), (2, 1), (2, 3)]));
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.components()[0].cells, cells(&[(1, 1), (2, 1)]));
        assert_eq!(d.components()[1].cells, cells(&[(2, 3)]));
        let rc = d.rc_sets(Cell::new(2, 3)).unwrap();
        assert_eq!((rc.rows.as_slice(), rc.cols.as_slice()), (&[1][..], &[2][..]));
        assert!(is_vexillary_pattern(&w));
        assert!(is_vexillary_restriction(&w));
    }

    #[test]
    fn transposition_is_not_vexillary() {
        let w = PartialPermutation::parse("0 1 0 / 1 0 0 / 0 0 0").unwrap();
        let d = RotheDiagram::new(&w);
        assert_eq!(d.cells(), cells(&[(1, 1), (3, 3)]));
        let rc = d.rc_sets(Cell::new(3, 3)).unwrap();
        assert_eq!((rc.rows.clone(), rc.cols.clone()), (vec![1, 2], vec![1, 2]));
        assert!(!is_vexillary_pattern(&w));
        assert!(!is_vexillary_restriction(&w));
    }

    #[test]
    fn identity_has_empty_diagram() {
        let d = RotheDiagram::new(&PartialPermutation::identity(4));
        assert!(d.is_empty());
        assert!(d.components().is_empty());
    }

    #[test]
    fn determinantal_rectangle() {
        for (m, n, r) in [(3, 4, 1), (4, 4, 2), (2, 3, 0)] {
            let d = RotheDiagram::new(&PartialPermutation::determinantal(m, n, r));
            assert_eq!(d.len(), (m - r) * (n - r));
            assert_eq!(d.components().len(), 1);
            assert!(d.components()[0].is_rectangle());
        }
    }

    #[test]
    fn minor_of_cell() {
        let w = PartialPermutation::parse("0 1 0 / 1 0 0 / 0 0 0").unwrap();
        let d = RotheDiagram::new(&w);
        let f = d.minor(Cell::new(3, 3)).unwrap();
        assert_eq!((f.rows(), f.cols()), (&[1, 2, 3][..], &[1, 2, 3][..]));
        assert_eq!(d.minor(Cell::new(1, 1)).unwrap().size(), 1);
        assert!(d.minor(Cell::new(2, 2)).is_none());
    }
}
