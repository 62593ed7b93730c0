use thiserror::Error;

/// Errors produced across the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("eigensolver did not converge (best residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("fit did not converge: {0}")]
    Fit(String),

    #[error("singular confusion matrix on qubit {0}")]
    SingularConfusion(usize),

    #[error("missing histogram for basis group {0}")]
    MissingBasis(usize),

    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("qubit count mismatch: state has {state}, operator has {operator}")]
    QubitMismatch { state: usize, operator: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by bad input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Contract(_)
                | Error::ParameterCount { .. }
                | Error::QubitMismatch { .. }
                | Error::MissingBasis(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
