//! # Error type
//!
//! A single error enum covers the whole library. Variants separate "your
//! inputs violate a documented precondition" from "this particular
//! evaluation could not be carried out", because callers route them
//! differently: specification problems are user-fixable configuration
//! mistakes, while evaluation problems are per-frequency-point conditions
//! that sweeps normally absorb into point flags.

use std::fmt;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by synthesis, network evaluation, and optimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A specification or parameter violates a documented precondition.
    Spec(String),
    /// A network could not be evaluated at a particular frequency point
    /// (degenerate electrical length, vanishing conversion denominator).
    Evaluation(String),
    /// A response trace does not cover the bands a metric needs.
    Coverage(String),
    /// Optimizer bounds or site assignments admit no valid candidate.
    Infeasible(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Spec(msg) => write!(f, "invalid specification: {msg}"),
            Error::Evaluation(msg) => write!(f, "evaluation failed: {msg}"),
            Error::Coverage(msg) => write!(f, "insufficient trace coverage: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible optimization setup: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
