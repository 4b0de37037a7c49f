use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::decompose::decompose;
use super::diagram::{is_vexillary_pattern, is_vexillary_restriction, RotheDiagram};
use super::partial::PartialPermutation;
use crate::cell::Cell;

/// Block sizes of a `Gr2` partial permutation.
///
/// The untransposed layout has row blocks `r1 | r2 | m1` and column blocks
/// `r1 | n1 | r2 | n2`, with identity blocks at `(1,1)` and `(2,3)`:
///
/// ```text
/// I_r1  0  0    0
///  0    0  I_r2 0
///  0    0  0    0
/// ```
///
/// `r2 = 0` is the determinantal form `[[I_r1, 0], [0, 0]]`, normalized to
/// `n1 = n - r1`, `n2 = 0`. With `transposed` set the matrix is the transpose
/// of the layout above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gr2Params {
    pub r1: usize,
    pub n1: usize,
    pub r2: usize,
    pub n2: usize,
    pub m1: usize,
    pub transposed: bool,
}

impl Gr2Params {
    pub fn determinantal(m: usize, n: usize, r: usize) -> Self {
        assert!(r >= 1 && r <= m.min(n));
        Gr2Params { r1: r, n1: n - r, r2: 0, n2: 0, m1: m - r, transposed: false }
    }

    pub fn is_determinantal(&self) -> bool {
        self.r2 == 0
    }

    /// `(m, n)` of the untransposed layout.
    fn layout_dims(&self) -> (usize, usize) {
        (self.r1 + self.r2 + self.m1, self.r1 + self.n1 + self.r2 + self.n2)
    }

    pub fn dims(&self) -> (usize, usize) {
        let (m, n) = self.layout_dims();
        if self.transposed {
            (n, m)
        } else {
            (m, n)
        }
    }

    /// The same blocks in the untransposed layout.
    pub fn untransposed(&self) -> Self {
        Gr2Params { transposed: false, ..*self }
    }

    pub fn build(&self) -> PartialPermutation {
        let (m, n) = self.layout_dims();
        let ones =
            (1..=self.r1).map(|i| (i, i)).chain((1..=self.r2).map(|k| (self.r1 + k, self.r1 + self.n1 + k)));
        let w = PartialPermutation::new(m, n, ones).expect("Gr2 layout");
        if self.transposed {
            w.transpose()
        } else {
            w
        }
    }

    /// Matches `w` literally against the three block forms.
    pub fn match_gr2(w: &PartialPermutation) -> Option<Self> {
        match_untransposed(w)
            .or_else(|| match_untransposed(&w.transpose()).map(|p| Gr2Params { transposed: true, ..p }))
    }

    /// A `Gr2` partial permutation whose diagram equals `d`, read off the
    /// rectangle shape of its components. `None` when the shape does not fit.
    ///
    /// The empty diagram is matched by the `1 x 1` identity.
    pub fn from_shape(d: &RotheDiagram) -> Option<Self> {
        let comps = d.components();
        if comps.is_empty() {
            return Some(Gr2Params::determinantal(1, 1, 1));
        }
        if comps.len() > 2 || comps.iter().any(|k| !k.is_rectangle()) {
            return None;
        }
        let c1 = &comps[0];
        let a = c1.top();
        if c1.left() != a || a < 2 {
            return None;
        }
        let params = match comps.get(1) {
            None => Gr2Params::determinantal(c1.bottom(), c1.right(), a - 1),
            Some(c2) if c2.bottom() == c1.bottom() => {
                let s = c2.top().checked_sub(a)?;
                if s == 0 || c2.left() != c1.right() + 1 + s {
                    return None;
                }
                Gr2Params {
                    r1: a - 1,
                    n1: c1.right() - a + 1,
                    r2: s,
                    n2: c2.right() - c1.right() - s,
                    m1: c1.bottom() + 1 - a - s,
                    transposed: false,
                }
            }
            Some(c2) if c2.right() == c1.right() => {
                let s = c2.left().checked_sub(a)?;
                if s == 0 || c2.top() != c1.bottom() + 1 + s {
                    return None;
                }
                Gr2Params {
                    r1: a - 1,
                    n1: c1.bottom() - a + 1,
                    r2: s,
                    n2: c2.bottom() - c1.bottom() - s,
                    m1: c1.right() + 1 - a - s,
                    transposed: true,
                }
            }
            Some(_) => return None,
        };
        (RotheDiagram::new(&params.build()).cells() == d.cells()).then_some(params)
    }

    /// Every distinct `Gr2` partial permutation with `m <= max_m`,
    /// `n <= max_n`, in canonical (matched) form.
    pub fn enumerate(max_m: usize, max_n: usize) -> Vec<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for m in 1..=max_m {
            for n in 1..=max_n {
                for r1 in 1..=m.min(n) {
                    for r2 in 0..=(m - r1) {
                        for n1 in 0..=(n - r1).saturating_sub(r2) {
                            if r1 + n1 + r2 > n {
                                continue;
                            }
                            for transposed in [false, true] {
                                let p = Gr2Params {
                                    r1,
                                    n1,
                                    r2,
                                    n2: n - r1 - n1 - r2,
                                    m1: m - r1 - r2,
                                    transposed: false,
                                };
                                let w = if transposed { p.build().transpose() } else { p.build() };
                                let (wm, wn) = (w.rows(), w.cols());
                                if wm > max_m || wn > max_n {
                                    continue;
                                }
                                let key = (wm, wn, w.ones());
                                if seen.insert(key) {
                                    out.push(Self::match_gr2(&w).expect("built from a Gr2 layout"));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn match_untransposed(w: &PartialPermutation) -> Option<Gr2Params> {
    let (m, n) = (w.rows(), w.cols());
    let ones = w.ones();
    let r = ones.len();
    if r == 0 || ones.iter().enumerate().any(|(k, c)| c.row != k + 1) {
        return None;
    }
    let r1 = ones.iter().take_while(|c| c.col == c.row).count();
    if r1 == 0 {
        return None;
    }
    if r1 == r {
        return Some(Gr2Params::determinantal(m, n, r));
    }
    let n1 = ones[r1].col.checked_sub(r1 + 1)?;
    let consecutive = ones[r1..].iter().all(|c| c.col == c.row + n1);
    (n1 >= 1 && consecutive).then(|| Gr2Params {
        r1,
        n1,
        r2: r - r1,
        n2: n - r - n1,
        m1: m - r,
        transposed: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonMinimal,
    Minimal,
    ConjecturedMinimal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NonMinimal => "non-minimal",
            Verdict::Minimal => "minimal",
            Verdict::ConjecturedMinimal => "conjectured-minimal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub vexillary: bool,
    pub vexillary_pattern: bool,
    pub vexillary_restriction: bool,
    pub in_gr2: bool,
    pub gr2_params: Option<Gr2Params>,
    pub in_gr2_tilde: bool,
    /// A `Gr2` partial permutation with the same diagram, when one exists.
    pub gr2_twin: Option<Gr2Params>,
    /// Vexillary with `(1,1)` in the diagram.
    pub decomposable: bool,
    pub verdict: Verdict,
}

pub fn classify(w: &PartialPermutation) -> Classification {
    let d = RotheDiagram::new(w);
    let vexillary_pattern = is_vexillary_pattern(w);
    let vexillary_restriction = is_vexillary_restriction(w);
    let vexillary = vexillary_pattern && vexillary_restriction;
    let gr2_params = if vexillary { Gr2Params::match_gr2(w) } else { None };
    let gr2_twin = if vexillary { Gr2Params::from_shape(&d) } else { None };
    let decomposable = vexillary && d.contains(Cell::new(1, 1));
    let verdict = if !vexillary {
        Verdict::NonMinimal
    } else if gr2_twin.is_some() {
        Verdict::Minimal
    } else if decomposable {
        match decompose(w) {
            Ok(dec) if dec.factors.iter().all(|f| f.in_gr2_tilde) => Verdict::Minimal,
            _ => Verdict::ConjecturedMinimal,
        }
    } else {
        Verdict::ConjecturedMinimal
    };
    Classification {
        vexillary,
        vexillary_pattern,
        vexillary_restriction,
        in_gr2: gr2_params.is_some(),
        gr2_params,
        in_gr2_tilde: gr2_twin.is_some(),
        gr2_twin,
        decomposable,
        verdict,
    }
}
