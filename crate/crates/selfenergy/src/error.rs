//! Error taxonomy shared by every module.
//!
//! The split matters for the CLI exit-code contract: configuration/input
//! problems and numerical failures are distinguishable by variant.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violation: non-finite parameters, mismatched objects,
    /// out-of-range arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A trial profile with no nonzero dual-lattice point inside its bandwidth;
    /// such a profile carries no optimizable structure.
    #[error("degenerate profile: no nonzero dual point with |q| < K = {bandwidth} on the L = {box_side} dual grid")]
    DegenerateProfile { bandwidth: f64, box_side: f64 },

    /// An iterative solver or quadrature did not reach its tolerance within
    /// budget. Carries the best achieved residual/error estimate.
    #[error("numerical failure in {what}: residual {residual:e} above tolerance {tol:e}; {detail}")]
    NumericalFailure {
        what: &'static str,
        residual: f64,
        tol: f64,
        detail: String,
    },

    /// A Fock basis would exceed the configured dimension limit.
    #[error("capacity exceeded: basis dimension {dim} above limit {limit}")]
    Capacity { dim: usize, limit: usize },

    /// A named constant required by an evaluator was neither defaulted nor
    /// supplied by the user.
    #[error("missing constant: {0} (no default; supply it explicitly)")]
    MissingConstant(String),

    /// Fewer usable data points than a fit or statistic requires.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
