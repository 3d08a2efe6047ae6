use alloc::string::String;
use core::fmt;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (invalid parameters, out-of-range indices, points outside the
    /// half-ball, and so on).
    Domain(String),
    /// The requested evaluation sits on (or numerically indistinguishable
    /// from) a singular locus, e.g. `x == xi` for the fundamental solution.
    Singularity(String),
    /// A series that is genuinely divergent for the given parameters
    /// (e.g. the Gauss function at `x = 1` with `c - a - b <= 0`).
    Divergence(String),
    /// An iterative process exhausted its budget without meeting its
    /// tolerance. Carries a human-readable description of where.
    Convergence(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Singularity(msg) => write!(f, "singularity: {msg}"),
            Error::Divergence(msg) => write!(f, "divergent series: {msg}"),
            Error::Convergence(msg) => write!(f, "failed to converge: {msg}"),
        }
    }
}
