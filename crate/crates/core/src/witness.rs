//! Non-minimality witnesses for non-vexillary partial permutations.
//!
//! [`sigma`] holds the perturbed permutation matrix `sigma_hat` and the
//! closed-form tables of its first derivatives and complementary minors.
//! [`point`] transports that construction into `M_{m,n}` at a chosen
//! diagram cell, checks the Hessian structure there and assembles a
//! certificate that the mean curvature does not vanish.

mod point;
mod sigma;

pub use point::{
    build_witness_point, certify_nonminimal, select_witness_cell, verify_hessian_structure,
    CertificateChecks, HessianStructure, WitnessCell, WitnessCertificate, WitnessPoint,
};
pub use sigma::{
    build_sigma_hat, cofactor_matrix, cofactor_table, minor_case, minor_class, MinorCase, SigmaHat,
};

use thiserror::Error;

use crate::linalg::{int, ratio, LinalgError, Rational};
use crate::variety::VarietyError;

/// `(1/2, 1/3, 2)`.
pub fn default_parameters() -> [Rational; 3] {
    [ratio(1, 2), ratio(1, 3), int(2)]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the permutation is the identity and has no descent")]
    IdentityPermutation,
    #[error("witness parameters must be nonzero")]
    ZeroParameter,
    #[error("no diagram cell has a non-identity restriction: the input is vexillary")]
    VexillaryInput,
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("removed rows and removed columns must each be two distinct indices")]
    RepeatedIndex,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
