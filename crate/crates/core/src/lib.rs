//! Exact analysis of minimality for real matrix Schubert varieties.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] exact rational matrices, determinants, minors and their
//!   first and second derivatives, Gram systems.
//! * [`perm`] partial permutations, their extension to permutations, Rothe
//!   diagrams, vexillarity, the `Gr2` classes and product decomposition.
//! * [`variety`] membership in `X_w` and its closure, regular-point sampling,
//!   the gradient normal frame and the per-cell mean-curvature obstruction.
//! * [`product`] regular points of decomposable varieties assembled from
//!   their factors, with the composite obstruction checked factor by factor.
//! * [`witness`] the perturbed point at which a non-vexillary variety has
//!   nonzero mean curvature, together with a checkable certificate.
//! * [`gr2`] the column/row reflections and tangent constructions that force
//!   the mean curvature to vanish on `Gr2` varieties.
//! * [`selfcheck`] exhaustive small-size sweeps over all of the above.
//!
//! All arithmetic is exact; every zero test is a decision, not a tolerance.

pub mod cell;
pub mod gr2;
pub mod linalg;
pub mod perm;
pub mod product;
pub mod selfcheck;
pub mod variety;
pub mod witness;

pub use cell::Cell;
pub use linalg::{Rational, RationalMatrix};
pub use perm::{PartialPermutation, Permutation, RotheDiagram};
