use thiserror::Error;

use crate::algebra::ValidationReport;

/// Errors produced by the library.
///
/// Structural problems with input data (`Malformed`) are kept apart from
/// axiom failures (`InvalidAlgebra`), which carry the full report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid algebra: {}", .0.summary())]
    InvalidAlgebra(ValidationReport),

    #[error("not pseudocomplemented: element {0} has no largest annihilator")]
    NotPseudocomplemented(usize),

    #[error("invalid dual space: {0}")]
    InvalidSpace(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cap exceeded: {what} needs {needed}, limit is {limit}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("internal consistency: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap_exceeded(what: &'static str, needed: impl ToString, limit: impl ToString) -> Error {
    Error::CapExceeded {
        what,
        needed: needed.to_string(),
        limit: limit.to_string(),
    }
}
