use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("code construction failed: {0}")]
    Construction(String),

    #[error("expansion audit refused: {subsets} subsets exceed budget {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },

    #[error("malformed graph file, line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
