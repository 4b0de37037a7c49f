use num_traits::{Signed, Zero};
use serde::Serialize;

use super::WitnessError;
use crate::cell::Cell;
use crate::linalg::{det, int, Rational, RationalMatrix};
use crate::perm::Permutation;

/// The perturbed permutation matrix
/// `[[sigma, 0], [0, 0]] + y1 E_{l,n+1} + y2 E_{n+1,sigma(l)} + y1 y2 E_{n+1,n+1} + y3 E_{l+1,sigma(l)}`
/// where `l` is the first descent of `sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaHat {
    pub base: Permutation,
    pub descent: usize,
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub y: Vec<Rational>,
    pub matrix: RationalMatrix,
}

pub(crate) fn check_parameters(y: &[Rational; 3]) -> Result<(), WitnessError> {
    if y.iter().any(Zero::is_zero) {
        return Err(WitnessError::ZeroParameter);
    }
    Ok(())
}

pub fn build_sigma_hat(sigma: &Permutation, y: &[Rational; 3]) -> Result<SigmaHat, WitnessError> {
    let Some(l) = sigma.first_descent() else {
        return Err(WitnessError::IdentityPermutation);
    };
    check_parameters(y)?;
    let n = sigma.size();
    let [y1, y2, y3] = y;
    let mut a = RationalMatrix::zeros(n + 1, n + 1);
    for i in 1..=n {
        a[(i - 1, sigma.apply(i) - 1)] = int(1);
    }
    let sl = sigma.apply(l);
    a[(l - 1, n)] = y1.clone();
    a[(n, sl - 1)] = y2.clone();
    a[(n, n)] = y1 * y2;
    a[(l, sl - 1)] = y3.clone();
    Ok(SigmaHat { base: sigma.clone(), descent: l, y: y.to_vec(), matrix: a })
}

impl SigmaHat {
    pub fn size(&self) -> usize {
        self.base.size() + 1
    }

    fn ys(&self) -> (&Rational, &Rational, &Rational) {
        (&self.y[0], &self.y[1], &self.y[2])
    }
}

/// The six nonzero first derivatives of `det` at `sh`, from the closed form.
/// Every other position has derivative zero.
pub fn cofactor_table(sh: &SigmaHat) -> Vec<(Cell, Rational)> {
    let n1 = sh.size();
    let l = sh.descent;
    let s = &sh.base;
    let d = int(s.sign());
    let (y1, y2, y3) = sh.ys();
    let (sl, sl1) = (s.apply(l), s.apply(l + 1));
    vec![
        (Cell::new(n1, n1), d.clone()),
        (Cell::new(n1, sl), -(y1 * &d)),
        (Cell::new(n1, sl1), y1 * y3 * &d),
        (Cell::new(l, n1), -(y2 * &d)),
        (Cell::new(l, sl), y1 * y2 * &d),
        (Cell::new(l, sl1), -(y1 * y2 * y3 * &d)),
    ]
}

/// [`cofactor_table`] laid out as a full matrix.
pub fn cofactor_matrix(sh: &SigmaHat) -> RationalMatrix {
    let n1 = sh.size();
    let mut g = RationalMatrix::zeros(n1, n1);
    for (c, v) in cofactor_table(sh) {
        g[c.index()] = v;
    }
    g
}

/// The exact `(n-1) x (n-1)` minor of `sh` with the two given rows and two
/// given columns removed.
pub fn minor_class(
    sh: &SigmaHat,
    removed_rows: (usize, usize),
    removed_cols: (usize, usize),
) -> Result<Rational, WitnessError> {
    let n1 = sh.size();
    for v in [removed_rows.0, removed_rows.1, removed_cols.0, removed_cols.1] {
        if v == 0 || v > n1 {
            return Err(WitnessError::IndexOutOfRange { index: v, bound: n1 });
        }
    }
    if removed_rows.0 == removed_rows.1 || removed_cols.0 == removed_cols.1 {
        return Err(WitnessError::RepeatedIndex);
    }
    let keep = |pair: (usize, usize)| -> Vec<usize> {
        (1..=n1).filter(|&v| v != pair.0 && v != pair.1).map(|v| v - 1).collect()
    };
    Ok(det(&sh.matrix.submatrix(&keep(removed_rows), &keep(removed_cols)))?)
}

/// Which of the five families a removed row/column pair falls in, with the
/// predicted absolute value of the minor. `None` means the minor vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCase {
    pub family: u8,
    pub magnitude: Rational,
}

pub fn minor_case(
    sh: &SigmaHat,
    removed_rows: (usize, usize),
    removed_cols: (usize, usize),
) -> Option<MinorCase> {
    let n1 = sh.size();
    let l = sh.descent;
    let s = &sh.base;
    let (y1, y2, y3) = sh.ys();
    let (sl, sl1) = (s.apply(l), s.apply(l + 1));
    let one = int(1);
    let rows = sorted(removed_rows);
    let cols = sorted(removed_cols);
    let is = |a: usize, b: usize| cols == sorted((a, b));
    let case = |family: u8, options: Vec<((usize, usize), Rational)>| {
        options
            .into_iter()
            .find(|((a, b), _)| is(*a, *b))
            .map(|(_, v)| MinorCase { family, magnitude: v.abs() })
    };
    let other = |a: usize, b: usize| -> Option<usize> {
        if rows.0 == a && rows.1 != b {
            Some(rows.1)
        } else if rows.1 == a && rows.0 != b {
            Some(rows.0)
        } else {
            None
        }
    };
    if rows == sorted((l, n1)) {
        return case(1, vec![((sl, n1), one), ((sl1, n1), y3.clone())]);
    }
    if rows == sorted((l, l + 1)) {
        return case(2, vec![((sl, sl1), y1 * y2), ((sl1, n1), y2.clone())]);
    }
    if rows == sorted((n1, l + 1)) {
        return case(4, vec![((sl, sl1), y1.clone()), ((sl1, n1), one)]);
    }
    if let Some(i) = other(l, l + 1).filter(|&i| i != n1) {
        let si = s.apply(i);
        return case(3, vec![((sl, si), y1 * y2), ((sl1, si), y1 * y2 * y3), ((n1, si), y2.clone())]);
    }
    if let Some(i) = other(n1, l + 1).filter(|&i| i != l) {
        let si = s.apply(i);
        return case(5, vec![((sl, si), y1.clone()), ((sl1, si), y1 * y3), ((n1, si), one)]);
    }
    None
}

fn sorted((a, b): (usize, usize)) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
