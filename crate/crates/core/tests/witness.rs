use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schubert_core::linalg::{det, int, ratio, Rational, RationalMatrix};
use schubert_core::perm::is_vexillary_pattern;
use schubert_core::variety::contains_regular;
use schubert_core::witness::{
    build_sigma_hat, build_witness_point, certify_nonminimal, cofactor_matrix, default_parameters,
    minor_case, minor_class, select_witness_cell, verify_hessian_structure,
};
use schubert_core::{Cell, PartialPermutation, Permutation};

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-9..=9);
        let q: i64 = rng.gen_range(1..=7);
        if p != 0 {
            return ratio(p, q);
        }
    }
}

fn random_y(rng: &mut ChaCha8Rng) -> [Rational; 3] {
    [random_nonzero(rng), random_nonzero(rng), random_nonzero(rng)]
}

fn non_identity(max: usize) -> impl Iterator<Item = Permutation> {
    (2..=max).flat_map(Permutation::all).filter(|s| !s.is_identity())
}

fn non_vexillary(max: usize) -> Vec<PartialPermutation> {
    (1..=max)
        .flat_map(|m| (1..=max).flat_map(move |n| PartialPermutation::enumerate(m, n)))
        .filter(|w| !is_vexillary_pattern(w))
        .collect()
}

/// `d det / d x_ij` as the determinant with row `i` replaced by `e_j`.
fn row_replacement_derivative(a: &RationalMatrix, cell: Cell) -> Rational {
    let mut b = a.clone();
    for t in 0..a.cols() {
        b[(cell.row - 1, t)] = if t + 1 == cell.col { int(1) } else { Rational::zero() };
    }
    det(&b).unwrap()
}

#[test]
fn cofactor_table_matches_row_replacement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in non_identity(4) {
        for _ in 0..5 {
            let sh = build_sigma_hat(&s, &random_y(&mut rng)).unwrap();
            let n1 = sh.size();
            let closed = cofactor_matrix(&sh);
            let oracle = RationalMatrix::from_fn(n1, n1, |i, j| {
                row_replacement_derivative(&sh.matrix, Cell::new(i + 1, j + 1))
            });
            assert_eq!(closed, oracle, "sigma = {s}");
        }
    }
}

#[test]
fn last_row_is_proportional_to_descent_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for s in non_identity(4) {
        let y = random_y(&mut rng);
        let sh = build_sigma_hat(&s, &y).unwrap();
        let (l, n1) = (sh.descent, sh.size());
        for j in 0..n1 {
            assert_eq!(sh.matrix[(n1 - 1, j)], &sh.matrix[(l - 1, j)] * &y[1], "sigma = {s}");
        }
    }
}

#[test]
fn minor_families_match_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for s in non_identity(4) {
        for _ in 0..5 {
            let sh = build_sigma_hat(&s, &random_y(&mut rng)).unwrap();
            let n1 = sh.size();
            for i1 in 1..=n1 {
                for i2 in i1 + 1..=n1 {
                    for j1 in 1..=n1 {
                        for j2 in j1 + 1..=n1 {
                            let exact = minor_class(&sh, (i1, i2), (j1, j2)).unwrap();
                            let predicted = minor_case(&sh, (i1, i2), (j1, j2));
                            match predicted {
                                Some(case) => {
                                    assert_eq!(exact.abs(), case.magnitude, "{s} {i1},{i2} {j1},{j2}")
                                }
                                None => assert!(exact.is_zero(), "{s} {i1},{i2} {j1},{j2}: {exact}"),
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rows_away_from_descent_and_last_give_zero() {
    let s = Permutation::new(vec![1, 3, 2, 4]).unwrap();
    let sh = build_sigma_hat(&s, &default_parameters()).unwrap();
    // l = 2, n + 1 = 5: removing rows {1, 4} leaves rows 2 and 5 proportional.
    for j1 in 1..=5 {
        for j2 in j1 + 1..=5 {
            assert!(minor_class(&sh, (1, 4), (j1, j2)).unwrap().is_zero());
        }
    }
}

#[test]
fn witness_point_restricts_to_sigma_hat() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for w in non_vexillary(4) {
        let wc = select_witness_cell(&w).unwrap();
        let wp = build_witness_point(&w, &wc, &random_y(&mut rng)).unwrap();
        let rows: Vec<usize> = wc.minor_rows().iter().map(|r| r - 1).collect();
        let cols: Vec<usize> = wc.minor_cols().iter().map(|c| c - 1).collect();
        assert_eq!(wp.point.submatrix(&rows, &cols), wp.sigma_hat.matrix, "{w:?}");
        assert!(contains_regular(&w, &wp.point).unwrap(), "{w:?}");
    }
}

#[test]
fn hessian_structure_holds_on_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for w in non_vexillary(4) {
        let wc = select_witness_cell(&w).unwrap();
        let wp = build_witness_point(&w, &wc, &random_y(&mut rng)).unwrap();
        let report = verify_hessian_structure(&w, &wp).unwrap();
        assert!(report.passed(), "{w:?}: {:?}", report.violations);
    }
}

/// Cells `(i,j)` of the diagram, read straight from the definition, with
/// their `R` and `C` sets.
fn diagram_with_sets(w: &PartialPermutation) -> Vec<(Cell, Vec<usize>, Vec<usize>)> {
    let e = w.extend();
    let inv = e.inverse();
    let mut out = Vec::new();
    for i in 1..=w.rows() {
        for j in 1..=w.cols() {
            if e.apply(i) > j && inv.apply(j) > i {
                let rows = (1..i).filter(|&r| e.apply(r) < j).collect();
                let cols = (1..j).filter(|&c| inv.apply(c) < i).collect();
                out.push((Cell::new(i, j), rows, cols));
            }
        }
    }
    out
}

#[test]
fn witness_cell_minimizes_row_plus_column() {
    for w in non_vexillary(4) {
        let e = w.extend();
        let best = diagram_with_sets(&w)
            .into_iter()
            .filter(|(_, rows, cols)| {
                rows.len() >= 2 && rows.iter().zip(cols).any(|(&r, &c)| e.apply(r) != c)
            })
            .map(|(c, _, _)| (c.row + c.col, c))
            .min()
            .unwrap();
        assert_eq!(select_witness_cell(&w).unwrap().cell, best.1, "{w:?}");
    }
    let w = PartialPermutation::parse("0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 0").unwrap();
    assert_eq!(select_witness_cell(&w).unwrap().cell, Cell::new(4, 4));
}

#[test]
fn trace_parity() {
    let w = PartialPermutation::parse("0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 0").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let [y1, y2, y3] = random_y(&mut rng);
        let t = |a: &Rational, b: &Rational, c: &Rational| {
            certify_nonminimal(&w, &[a.clone(), b.clone(), c.clone()]).unwrap().numeric_trace
        };
        let base = t(&y1, &y2, &y3);
        assert_eq!(t(&-&y1, &y2, &y3), -&base);
        assert_eq!(t(&y1, &-&y2, &y3), -&base);
        assert_eq!(t(&y1, &y2, &-&y3), base);
    }
}
