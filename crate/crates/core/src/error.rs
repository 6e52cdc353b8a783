use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("operation requires exactly 2 colours, graph has {0}")]
    NotTwoColoured(u8),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),

    #[error("search budget exceeded: {needed} candidate configurations > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resampling budget of {0} attempts exhausted")]
    ResamplingExhausted(usize),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
