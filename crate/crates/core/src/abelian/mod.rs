//! Exact integer linear algebra and finite abelian groups.
//!
//! Everything here is arbitrary-precision: Smith normal form with its
//! unimodular transforms, cokernel presentations of surgery matrices, and
//! subgroups kept in a canonical Hermite form so that equality, membership,
//! and deduplication are cheap and exact.

mod group;
mod matrix;
mod snf;
mod subgroup;

pub use group::{cokernel_presentation, FiniteAbelianGroup, GroupElement};
pub use matrix::{is_unimodular, IntMatrix};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use subgroup::Subgroup;

/// Errors from presentation-level integer computations.
#[derive(Debug, thiserror::Error)]
pub enum AbelianError {
    /// A presentation matrix had determinant zero, so its cokernel is
    /// infinite and does not describe a rational homology sphere.
    #[error("matrix is singular: the presented group is infinite")]
    SingularMatrix,
    /// An operation that needs a square matrix received a rectangular one.
    #[error("matrix is {rows}x{cols} but must be square")]
    NotSquare { rows: usize, cols: usize },
    /// Invariant factors must each be at least 2 and form a divisibility
    /// chain.
    #[error("invalid invariant factors: {0}")]
    InvalidInvariantFactors(String),
}
