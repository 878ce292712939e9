//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("nu must be at least 2 (got {0}); the nu=1 rule degenerates to all-zero weights")]
    InvalidNu(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("sample count {got} does not match nu+1 = {want}")]
    SampleCount { got: usize, want: usize },

    #[error("x = {x} outside interval [{lo}, {hi}]")]
    OutOfInterval { x: f64, lo: f64, hi: f64 },

    #[error("exact monomial coefficients overflow for degree {0} (supported up to 40)")]
    MonomialOverflow(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("variable `{0}` is not bound")]
    UnboundVariable(char),

    #[error("problem config: {0}")]
    Config(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("non-finite value from {what} at {where_}")]
    NonFinite { what: String, where_: String },

    #[error("singular local system on subinterval {interval}")]
    SingularSystem { interval: usize },

    #[error("Newton iteration did not converge on subinterval {interval} after {iters} iterations (residual {residual:e})")]
    NewtonNonConvergence {
        interval: usize,
        iters: usize,
        residual: f64,
    },

    #[error("problem `{0}` has no exact solution; a convergence study requires one")]
    MissingExact(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
