use thiserror::Error;

use crate::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsafe rule `{rule}`: variable {var} does not occur in a positive body literal")]
    Safety { rule: String, var: String },

    #[error("invalid choice bounds in `{0}`")]
    ChoiceBounds(String),

    #[error("weak constraint `{0}` has a non-integer weight")]
    Weight(String),

    #[error("mode bias: {0}")]
    Bias(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("rule space has {size} rules, the brute-force oracle is limited to {limit}")]
    OracleRefused { size: usize, limit: usize },

    #[error("finite penalties are not supported by this algorithm")]
    NoiseUnsupported,

    #[error("no solution exists in the program space")]
    NoSolution,

    #[error("resource budget exceeded: {0}")]
    ResourceExceeded(String),
}
