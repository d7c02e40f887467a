//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Numerical routines return errors instead of panicking so that sweep
/// drivers can record a failed trial and keep going.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter is outside its valid range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A terminal coincides with the array reference point, so no
    /// direction of departure exists.
    #[error("terminal at zero distance from the array center")]
    ZeroDistance,

    /// Inputs disagree in dimension (channel rows vs noise entries, ...).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The initial surface placement already violates a constraint.
    #[error("initial poses infeasible: {0}")]
    InfeasibleInitialPoses(String),

    /// A proximal subproblem has an empty feasible set.
    #[error("proximal subproblem infeasible")]
    QpInfeasible,

    /// No active-set candidate passed the KKT certificate. The feasible
    /// set is nonempty, so this indicates a degenerate constraint cluster;
    /// callers treat it as "no movement this step".
    #[error("no KKT-certified solution for the proximal subproblem")]
    QpNoCertificate,

    /// An objective evaluation produced NaN or infinity.
    #[error("objective evaluation returned a non-finite value")]
    NonFiniteObjective,

    /// A linear solve failed (singular normal-equation system).
    #[error("linear solve failed: {0}")]
    SingularSystem(String),

    /// Config file problems: missing keys, unknown keys, bad values.
    #[error("config key '{key}': {reason}")]
    InvalidConfig { key: String, reason: String },

    /// Underlying I/O failure, tagged with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig { key: key.into(), reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
