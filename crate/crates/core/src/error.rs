//! Error type shared across the crate.

use crate::lattice::GridShape;

/// Errors surfaced by lattice, oracle, solver, and verification operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A shape parameter was zero.
    #[error("grid shape requires n >= 1 and k >= 1, got n={n}, k={k}")]
    InvalidShape { n: u32, k: u32 },

    /// A point did not fit the shape it was used with.
    #[error("invalid point for shape {shape}: {reason}")]
    InvalidPoint { shape: GridShape, reason: String },

    /// Exhaustive enumeration was requested on a grid larger than the budget.
    #[error("exhaustive enumeration over {points} points exceeds budget {budget} (override to proceed)")]
    BudgetExceeded { points: u128, budget: u64 },

    /// A box `[lo, hi]` with `lo <= hi` was required.
    #[error("invalid box: lo must be componentwise <= hi")]
    InvalidBox,

    /// Kleene iteration ran past the bound only a non-monotone oracle can exceed.
    #[error("non-monotone oracle: {0}")]
    NonMonotoneOracle(String),

    /// A hypercube response could not have come from any hidden-point function.
    #[error("not a family-F response: {0}")]
    NotFamilyResponse(String),

    /// A response stream contradicted the hidden-point family mid-solve.
    #[error("not a family-F oracle: {0}")]
    NotFamilyOracle(String),

    /// A knowledge update contradicted a previously learned bit.
    #[error("inconsistent history: {0}")]
    InconsistentHistory(String),

    /// Monotone-function enumeration is capped at tiny grids.
    #[error("monotone-function enumeration supports at most {cap} points, shape has {points}")]
    EnumerationTooLarge { points: u128, cap: u64 },

    /// An instance description failed validation.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
