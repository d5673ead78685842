//! Error type shared by every module of the workbench.

use thiserror::Error;

/// Workbench-wide error enumeration.
#[derive(Debug, Error)]
pub enum QotError {
    /// A scalar or structured input failed a domain check.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A channel plan violated its structural invariants.
    #[error("invalid channel plan: {0}")]
    InvalidPlan(String),

    /// An evaluation was requested outside the model's validity region.
    #[error("model domain violation: {0}")]
    ModelDomain(String),

    /// The adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: {0}")]
    OracleNonConvergence(String),

    /// A configuration document could not be interpreted.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, QotError>;
