use thiserror::Error;

/// Errors raised while building networks, balance sheets, or running cascades.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("network generation failed: {0}")]
    Generation(String),

    #[error("balance-sheet construction failed: {0}")]
    Construction(String),

    #[error("allocation of {epsilon} to bank {bank} exceeds its liabilities {liabilities}")]
    Allocation {
        bank: usize,
        epsilon: f64,
        liabilities: f64,
    },

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("no candidate for shock target: {0}")]
    Selection(String),

    #[error("cascade still producing defaults after {rounds} rounds")]
    Diverged { rounds: u32 },

    #[error("trial {index}: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
