//! Tarski fixed-point search on the `k`-dimensional grid of side length `n`.
//!
//! The grid `{0, .., n-1}^k` under the componentwise order is a complete
//! lattice, so every monotone self-map has a fixed point. This crate provides
//! the pieces needed to study how hard those fixed points are to *find* in the
//! query model, where an algorithm learns `f` only by probing points:
//!
//! * [`lattice`] — grid shapes, points, the componentwise order, meet/join,
//!   enumeration, and box clamping.
//! * [`oracle`] — query-model access to monotone functions: the hidden-point
//!   family `f^a`, explicit tables, the hypercube clamp lift, box restriction,
//!   and exact query accounting.
//! * [`solver`] — fixed-point search algorithms: Kleene iteration from bottom
//!   or top, recursive divide-and-conquer, and the interval solver specialized
//!   to the hidden-point family.
//! * [`adversary`] — the information-theoretic side: hypercube knowledge-set
//!   tracking, per-query gain statistics, response fan-out enumeration, and
//!   average-query experiments against the uniform instance distribution.
//! * [`verify`] — brute-force ground truth: monotonicity checking, exhaustive
//!   fixed-point enumeration, lattice-structure checks, and enumeration of all
//!   monotone functions on tiny grids.

pub mod adversary;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use error::Error;
pub use lattice::{iterate_points, GridShape, Point, DEFAULT_ENUM_BUDGET};
pub use oracle::{
    lift_clamp, make_counting, restrict_box, BoxRestricted, ClampLift, CountingOracle,
    HiddenPointInstance, Instance, Oracle, QueryCounter, TableInstance,
};
pub use solver::{
    dnc_fixed_point, kleene_from_bottom, kleene_from_top, solve, solve_hidden_family, Algorithm,
    IntervalState, SolveOptions, SolveOutcome,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
