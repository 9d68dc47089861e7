//! The torsion linking form `lambda_2` and its Lagrangian subgroups.

mod enumerate;
mod form;
mod rational;

pub use enumerate::{split_form_lagrangian_count, MAX_ELEMENTARY_RANK, MAX_GENERAL_ORDER};
pub use form::{diagonal_linking_form, linking_form_from_matrix, LinkingForm, MAX_FORM_ORDER};
pub use rational::QmodZ;

use crate::abelian::AbelianError;

/// Errors from linking-form construction, evaluation, and enumeration.
#[derive(Debug, thiserror::Error)]
pub enum LinkingError {
    /// A rational was built with denominator zero.
    #[error("zero denominator in a rational")]
    ZeroDenominator,
    /// Text did not parse as a canonical `a/b` rational.
    #[error("bad rational {0}")]
    BadRational(String),
    /// The Gram matrix does not match the group rank.
    #[error("Gram matrix has {rows} rows but the group has rank {rank}")]
    GramShape { rank: usize, rows: usize },
    /// A linking form (or presentation matrix) must be symmetric.
    #[error("form data is not symmetric")]
    NonSymmetric,
    /// A Gram entry is not annihilated by its generators' orders, so the
    /// pairing would not descend to the group.
    #[error(
        "Gram entry ({i},{j}) = {value} is not annihilated by {modulus}: \
         the pairing is not well-defined on the group"
    )]
    NotWellDefined {
        i: usize,
        j: usize,
        value: String,
        modulus: String,
    },
    /// The pairing has a nonzero radical, so it is not a linking form of a
    /// rational homology sphere.
    #[error("form is degenerate: {witness} pairs to zero with everything")]
    Degenerate { witness: String },
    /// Construction-time validation is brute-force and refuses groups it
    /// cannot check exactly.
    #[error("group order {order} exceeds the supported bound {max}")]
    GroupTooLarge { order: String, max: u64 },
    /// Elements or subgroups from a different group were supplied.
    #[error("group mismatch: expected rank {expected}, got {got}")]
    GroupMismatch { expected: usize, got: usize },
    /// The request is exact-arithmetic sound but outside the supported
    /// enumeration scope.
    #[error("unsupported scope: {0}")]
    UnsupportedScope(String),
    /// An underlying presentation computation failed.
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}
