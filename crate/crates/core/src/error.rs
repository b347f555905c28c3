use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed instance or matrix file. `line` is 1-based.
    #[error("{msg} at line {line}")]
    Parse { line: usize, msg: String },

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("{what}: {got} agents exceeds the limit of {limit}")]
    OverCap {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("asymptotic only: no exact closed form for {0}")]
    AsymptoticOnly(String),

    #[error("search limit reached: {0}")]
    SearchLimit(String),

    #[error("no stable matching exists")]
    Infeasible,

    #[error("{0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
