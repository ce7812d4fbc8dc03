//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("cannot contract a degree-{multivector} multivector into a degree-{form} form")]
    ContractionDegree { multivector: usize, form: usize },

    #[error("expected a vector field, got multivector degree {0}")]
    NotAVectorField(usize),

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("form is not Hamiltonian: {0}")]
    NotHamiltonian(String),

    #[error("malformed rational scalar `{0}`")]
    BadScalar(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("model validation failed: check `{check}`: {msg}")]
    Validation { check: String, msg: String },

    #[error("unknown identity kind `{0}`")]
    UnknownKind(String),

    #[error("unknown command `{0}`")]
    UnknownCommand(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("expected zero ghost degree, got {0}")]
    NonzeroAlphaDegree(usize),

    #[error("operand contains a non-Hamiltonian generator: {0}")]
    BadGenerator(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
