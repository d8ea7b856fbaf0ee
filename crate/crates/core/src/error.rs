use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value {value} outside quantizer range [{min}, {max}]")]
    Range { value: f64, min: f64, max: f64 },

    #[error("graph is not connected")]
    Disconnected,

    #[error("target set is unreachable from state {0}; hitting time is unbounded")]
    UnboundedHittingTime(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("survival mass {remaining:e} still above tolerance after {ticks} ticks")]
    NonConvergent { ticks: u64, remaining: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{count} bound violation(s): {detail}")]
    BoundViolation { count: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
