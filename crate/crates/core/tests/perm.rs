use std::collections::BTreeSet;

use schubert_core::perm::{
    classify, decompose, is_vexillary_pattern, is_vexillary_restriction, Gr2Params, PermError, Placement,
    Verdict,
};
use schubert_core::{Cell, PartialPermutation, RotheDiagram};

fn pp(s: &str) -> PartialPermutation {
    PartialPermutation::parse(s).unwrap()
}

fn cells(v: &[(usize, usize)]) -> Vec<Cell> {
    let mut c: Vec<Cell> = v.iter().map(|&c| c.into()).collect();
    c.sort();
    c
}

const SEVEN_BY_EIGHT: &str = "0 0 0 0 0 0 1 0
0 0 0 0 0 0 0 0
0 0 0 0 1 0 0 0
0 0 0 0 0 0 0 1
1 0 0 0 0 0 0 0
0 0 1 0 0 0 0 0
0 0 0 0 0 1 0 0";

fn all_small(max: usize) -> impl Iterator<Item = PartialPermutation> {
    (1..=max).flat_map(move |m| (1..=max).flat_map(move |n| PartialPermutation::enumerate(m, n)))
}

#[test]
fn seven_by_eight_diagram() {
    let w = pp(SEVEN_BY_EIGHT);
    let d = RotheDiagram::new(&w);
    let mut expected: Vec<(usize, usize)> = Vec::new();
    expected.extend((1..=6).map(|j| (1, j)));
    expected.extend((1..=6).map(|j| (2, j)));
    expected.extend((1..=4).map(|j| (3, j)));
    expected.extend((1..=4).map(|j| (4, j)));
    expected.extend([(2, 8), (4, 6), (6, 2), (7, 2), (7, 4)]);
    assert_eq!(d.cells(), cells(&expected));
    let comps: Vec<Vec<Cell>> = d.components().iter().map(|k| k.cells.clone()).collect();
    assert_eq!(comps.len(), 5);
    assert!(comps.contains(&cells(&[(2, 8)])));
    assert!(comps.contains(&cells(&[(4, 6)])));
    assert!(comps.contains(&cells(&[(6, 2), (7, 2)])));
    assert!(comps.contains(&cells(&[(7, 4)])));
}

#[test]
fn seven_by_eight_decomposition() {
    let w = pp(SEVEN_BY_EIGHT);
    assert!(is_vexillary_pattern(&w));
    let dec = decompose(&w).unwrap();
    assert_eq!(dec.zero_cells.len(), 20);
    let mut factors: Vec<(Vec<usize>, Vec<usize>, PartialPermutation)> =
        dec.factors.iter().map(|f| (f.rows.clone(), f.cols.clone(), f.w.clone())).collect();
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let corner = pp("1 0 / 0 0");
    assert_eq!(factors[0], (vec![1, 2], vec![7, 8], corner.clone()));
    assert_eq!(factors[1], (vec![3, 4], vec![5, 6], corner));
    assert_eq!(factors[2], (vec![5, 6, 7], vec![1, 2, 3, 4], pp("1 0 0 0 / 0 0 1 0 / 0 0 0 0")));
    assert_eq!(dec.free_count(), 16);
    let c3 = classify(&factors[2].2);
    assert!(c3.in_gr2);
    assert_eq!(c3.gr2_params.unwrap().r2, 1);
    assert_eq!(classify(&w).verdict, Verdict::Minimal);
}

#[test]
fn small_example() {
    let w = pp("0 1 0 / 0 0 0 / 1 0 0");
    assert_eq!(w.extend().image(), &[2, 4, 1, 3, 5, 6]);
    let c = classify(&w);
    assert!(c.vexillary && c.decomposable);
    assert_eq!(c.verdict, Verdict::Minimal);
}

#[test]
fn gr2_example_pair() {
    let omega = pp("1 0 0 0 / 0 0 1 0 / 0 0 0 0");
    let mu = pp("1 0 0 0 0 / 0 0 1 0 0 / 0 0 0 0 1 / 0 1 0 0 0");
    assert!(is_vexillary_restriction(&omega));
    assert_eq!(RotheDiagram::new(&omega).cells(), RotheDiagram::new(&mu).cells());
    let c = classify(&mu);
    assert!(!c.in_gr2 && c.in_gr2_tilde);
}

#[test]
fn vexillary_tests_agree_exhaustively() {
    let mut count = 0;
    for w in all_small(4) {
        assert_eq!(is_vexillary_pattern(&w), is_vexillary_restriction(&w), "{w:?}");
        count += 1;
    }
    assert_eq!(count, 490);
}

#[test]
fn determinantal_is_vexillary() {
    for m in 1..=4 {
        for n in 1..=4 {
            for r in 0..=m.min(n) {
                let w = PartialPermutation::determinantal(m, n, r);
                assert!(is_vexillary_pattern(&w));
                assert_eq!(RotheDiagram::new(&w).len(), (m - r) * (n - r));
            }
        }
    }
}

#[test]
fn extension_and_diagram_invariants() {
    for w in all_small(4) {
        let (m, n) = (w.rows(), w.cols());
        let e = w.extend();
        let inv = e.inverse();
        for i in m + 1..m + n {
            assert!(e.apply(i) < e.apply(i + 1));
        }
        for j in n + 1..m + n {
            assert!(inv.apply(j) < inv.apply(j + 1));
        }
        // The full diagram of the extension stays inside the m x n block.
        for i in 1..=m + n {
            for j in 1..=m + n {
                if e.apply(i) > j && inv.apply(j) > i {
                    assert!(i <= m && j <= n, "{w:?} cell ({i},{j})");
                }
            }
        }
        let d = RotheDiagram::new(&w);
        for &c in d.cells() {
            let rc = d.rc_sets(c).unwrap();
            assert_eq!(rc.rows.len(), d.rank(c.row, c.col));
            assert_eq!(rc.cols.len(), d.rank(c.row, c.col));
        }
        for k in d.components() {
            for &c in &k.cells {
                let rc = d.rc_sets(c).unwrap();
                assert_eq!((&rc.rows, &rc.cols), (&k.rows, &k.cols));
            }
        }
    }
}

/// Diagram cell sets of every `Gr2` partial permutation up to the given size,
/// computed from the block layouts.
fn gr2_diagrams(max: usize) -> BTreeSet<Vec<Cell>> {
    Gr2Params::enumerate(max, max).iter().map(|p| RotheDiagram::new(&p.build()).cells().to_vec()).collect()
}

#[test]
fn shape_criterion_matches_diagram_equality() {
    // A Gr2 diagram that fits inside a 4x4 block comes from a Gr2 partial
    // permutation of size at most 5x5 (trailing zero blocks can be dropped).
    let known = gr2_diagrams(5);
    for w in all_small(4) {
        let d = RotheDiagram::new(&w);
        let by_shape = Gr2Params::from_shape(&d).is_some();
        let by_search = known.contains(d.cells());
        assert_eq!(by_shape, by_search, "{w:?}");
    }
}

#[test]
fn every_gr2_is_in_gr2_tilde() {
    for p in Gr2Params::enumerate(5, 5) {
        let w = p.build();
        let c = classify(&w);
        assert!(c.vexillary && c.in_gr2 && c.in_gr2_tilde, "{p:?}");
        assert_eq!(c.verdict, Verdict::Minimal);
    }
}

#[test]
fn decomposition_partitions_coordinates() {
    let mut seen = 0;
    for w in all_small(4) {
        let dec = match decompose(&w) {
            Ok(dec) => dec,
            Err(PermError::NotVexillary | PermError::TopLeftNotInDiagram) => continue,
            Err(e) => panic!("{w:?}: {e}"),
        };
        seen += 1;
        let d = RotheDiagram::new(&w);
        let block: usize = dec.factors.iter().map(|f| f.rows.len() * f.cols.len()).sum();
        assert_eq!(dec.zero_cells.len() + block + dec.free_count(), w.rows() * w.cols());
        let mut covered = BTreeSet::new();
        for &c in &dec.zero_cells {
            assert_eq!(dec.locate(c), Placement::Zero);
            assert!(covered.insert(c));
        }
        for f in &dec.factors {
            for c in f.coordinates() {
                assert!(covered.insert(c), "{w:?}: {c} in two parts");
            }
            // The factor's own diagram is exactly its components, relabelled.
            let mut mapped: Vec<Cell> =
                RotheDiagram::new(&f.w).cells().iter().map(|&c| f.global(c)).collect();
            mapped.sort();
            let mut own: Vec<Cell> =
                f.components.iter().flat_map(|&k| d.components()[k].cells.clone()).collect();
            own.sort();
            assert_eq!(mapped, own, "{w:?}");
        }
        for &c in &dec.free {
            assert!(covered.insert(c));
            assert!(!d.dominates(c));
        }
    }
    assert!(seen > 100);
}

#[test]
fn decompose_errors() {
    assert_eq!(decompose(&pp("1 0 / 0 0")).map(|_| ()), Err(PermError::TopLeftNotInDiagram));
    assert_eq!(decompose(&pp("0 1 0 / 1 0 0 / 0 0 0")).map(|_| ()), Err(PermError::NotVexillary));
}

#[test]
fn verdicts_are_consistent() {
    for w in all_small(4) {
        let c = classify(&w);
        match c.verdict {
            Verdict::NonMinimal => assert!(!c.vexillary),
            Verdict::Minimal => assert!(c.in_gr2_tilde || c.decomposable),
            Verdict::ConjecturedMinimal => assert!(c.vexillary && !c.in_gr2_tilde),
        }
        if c.in_gr2 {
            assert!(c.in_gr2_tilde);
        }
    }
}
