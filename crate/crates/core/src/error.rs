use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tables that are not `n x n`, or entries outside the carrier.
    #[error("malformed algebra: {0}")]
    Structure(String),

    #[error("algebra violates the ai-semiring axioms ({count} violations, first: {first})")]
    Axioms { count: usize, first: String },

    #[error("subset is not closed: {a} {op} {b} = {result} escapes the subset")]
    NotClosed {
        a: usize,
        b: usize,
        op: char,
        result: usize,
    },

    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),

    #[error("no element is both the additive bottom and a multiplicative zero")]
    NoZero,

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("variable `{0}` has no value in the assignment")]
    Unassigned(String),

    #[error("budget exceeded: {needed} evaluations needed, budget is {budget}")]
    Budget { needed: u128, budget: u64 },

    #[error("size bound exceeded: {what} is {size}, bound is {bound}")]
    Bound {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("every expansion of the scheme empties some word")]
    EmptyScheme,

    #[error("recipe error for `{name}`: {message}")]
    Recipe { name: String, message: String },

    #[error("claim error for `{name}`: {message}")]
    Claim { name: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
