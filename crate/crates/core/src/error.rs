use std::path::PathBuf;

use thiserror::Error;

use crate::model::Regime;

pub type Result<T, E = DplError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum DplError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("regime error: {operation} requires {expected}, got {actual:?}")]
    Regime {
        operation: &'static str,
        expected: &'static str,
        actual: Regime,
    },

    #[error("accumulator synchronization error: accumulator at t={accumulator_t}, requested t={requested_t}")]
    Synchronization {
        accumulator_t: f64,
        requested_t: f64,
    },

    #[error(
        "solver diverged at step {step} (t={t}); reduce cfl_safety or relax_safety in [experiment]"
    )]
    Divergence { step: usize, t: f64 },

    #[error("step control violated: {0}")]
    StepControl(String),

    #[error("unsupported setting: {0}")]
    UnsupportedSetting(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {omega} is not below the critical frequency {omega_c}")]
    AboveCriticalFrequency { omega: f64, omega_c: f64 },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("decay certification failed at x3={worst_x3}: {reason}")]
    Certification { worst_x3: f64, reason: String },

    #[error("missing report files in {dir}: expected one of {expected:?}")]
    MissingReports { dir: PathBuf, expected: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl DplError {
    /// Process exit status: 1 for a failed claim, 3 for numerical failure,
    /// 2 for everything the user can fix in the invocation or config.
    pub fn exit_code(&self) -> i32 {
        match self {
            DplError::Certification { .. } => 1,
            DplError::Divergence { .. } | DplError::StepControl(_) | DplError::Solver(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        DplError::InvalidInput(msg.into())
    }
}
