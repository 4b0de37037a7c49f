use num_traits::{One, Zero};
use proptest::prelude::*;

use schubert_core::linalg::{
    det, format_rational, minor_eval, minor_grad, minor_hessian_bilinear, minor_second_partial,
    minor_second_partials, parse_rational, projector, rank, ratio, solve, IndexedMinor, Rational,
    RationalMatrix,
};
use schubert_core::Cell;

/// Determinant by cofactor expansion along the first row.
fn laplace(a: &RationalMatrix) -> Rational {
    let n = a.rows();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if a[(0, j)].is_zero() {
            continue;
        }
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = &a[(0, j)] * laplace(&a.submatrix(&rows, &cols));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(rational(), rows * cols)
        .prop_map(move |v| RationalMatrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone()))
}

fn square() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=5).prop_flat_map(|n| matrix(n, n))
}

/// A random minor of a `rows x cols` matrix.
fn minor_in(rows: usize, cols: usize) -> impl Strategy<Value = IndexedMinor> {
    (1..=rows.min(cols)).prop_flat_map(move |k| {
        (
            proptest::sample::subsequence((1..=rows).collect::<Vec<_>>(), k),
            proptest::sample::subsequence((1..=cols).collect::<Vec<_>>(), k),
        )
            .prop_map(|(r, c)| IndexedMinor::new(r, c).unwrap())
    })
}

fn unit(a: &RationalMatrix, c: Cell) -> RationalMatrix {
    RationalMatrix::unit(a.rows(), a.cols(), c)
}

fn cells(a: &RationalMatrix) -> Vec<Cell> {
    (1..=a.rows()).flat_map(|i| (1..=a.cols()).map(move |j| Cell::new(i, j))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_matches_laplace(a in square()) {
        prop_assert_eq!(det(&a).unwrap(), laplace(&a));
    }

    #[test]
    fn det_is_multiplicative(n in 1usize..=4, seed in any::<u64>()) {
        let gen = |s: u64| RationalMatrix::from_fn(n, n, |i, j| {
            ratio(((s >> ((i * n + j) % 60)) % 7) as i64 - 3, 1 + ((s >> 3) % 3) as i64)
        });
        let (a, b) = (gen(seed), gen(seed.rotate_left(17)));
        prop_assert_eq!(det(&(&a * &b)).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn solve_satisfies_system(a in square(), x in prop::collection::vec(rational(), 5)) {
        let n = a.rows();
        let b: Vec<Rational> = (0..n).map(|i| (0..n).map(|j| &a[(i, j)] * &x[j]).sum()).collect();
        match solve(&a, &b) {
            Ok(y) => {
                let back: Vec<Rational> = (0..n).map(|i| (0..n).map(|j| &a[(i, j)] * &y[j]).sum()).collect();
                prop_assert_eq!(back, b);
            }
            Err(_) => prop_assert!(det(&a).unwrap().is_zero()),
        }
    }

    #[test]
    fn projector_is_orthogonal(a in (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| matrix(m, n))) {
        let p = projector(&a);
        prop_assert_eq!(&(&p * &p), &p);
        prop_assert_eq!(p.transpose(), p.clone());
        prop_assert_eq!(&(&p * &a), &a);
        prop_assert_eq!(rank(&p), rank(&a));
    }

    /// Each variable occurs at most once in a determinant, so `f(A + t E)` is
    /// affine in `t`: the forward difference is the exact derivative.
    #[test]
    fn gradient_is_forward_difference(
        (a, f) in (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| (matrix(m, n), minor_in(m, n)))
    ) {
        let g = minor_grad(&a, &f).unwrap();
        let f0 = minor_eval(&a, &f).unwrap();
        for c in cells(&a) {
            let diff = minor_eval(&(&a + &unit(&a, c)), &f).unwrap() - &f0;
            prop_assert_eq!(g.at(c), &diff);
        }
    }

    /// Mixed second difference; on the diagonal it is zero (vanishing
    /// ambient Laplacian).
    #[test]
    fn second_partials_are_mixed_differences(
        (a, f) in (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| (matrix(m, n), minor_in(m, n)))
    ) {
        let ev = |x: &RationalMatrix| minor_eval(x, &f).unwrap();
        let f0 = ev(&a);
        let mut laplacian = Rational::zero();
        for c1 in cells(&a) {
            let e1 = unit(&a, c1);
            let f1 = ev(&(&a + &e1));
            for c2 in cells(&a) {
                let e2 = unit(&a, c2);
                let expected = if c1 == c2 {
                    // f is affine along a single coordinate.
                    ev(&(&(&a + &e1) + &e1)) - &f1 - &f1 + &f0
                } else {
                    ev(&(&(&a + &e1) + &e2)) - &f1 - ev(&(&a + &e2)) + &f0
                };
                prop_assert_eq!(minor_second_partial(&a, &f, c1, c2).unwrap(), expected.clone());
                if c1 == c2 {
                    laplacian += expected;
                }
            }
        }
        prop_assert!(laplacian.is_zero());
    }

    #[test]
    fn sparse_hessian_matches_row_replacement(
        (a, f, v, w) in (1usize..=4, 1usize..=4)
            .prop_flat_map(|(m, n)| (matrix(m, n), minor_in(m, n), matrix(m, n), matrix(m, n)))
    ) {
        let mut sparse = Rational::zero();
        for (c1, c2, h) in minor_second_partials(&a, &f).unwrap() {
            sparse += h * v.at(c1) * w.at(c2);
        }
        prop_assert_eq!(minor_hessian_bilinear(&a, &f, &v, &w).unwrap(), sparse);
    }

    #[test]
    fn rational_text_round_trips(q in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
}

#[test]
fn ambient_laplacian_of_every_small_minor_vanishes() {
    let a =
        RationalMatrix::from_fn(4, 4, |i, j| ratio((i * 5 + j * 3) as i64 % 7 - 3, 1 + (i + j) as i64 % 3));
    let idx: Vec<usize> = (1..=4).collect();
    for k in 1..=4 {
        for rows in combinations(&idx, k) {
            for cols in combinations(&idx, k) {
                let f = IndexedMinor::new(rows.clone(), cols).unwrap();
                for c in cells(&a) {
                    assert!(minor_second_partial(&a, &f, c, c).unwrap().is_zero());
                }
            }
        }
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}
