//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid box: axis {axis} needs lo < hi, got [{lo}, {hi}]")]
    InvalidBox { axis: usize, lo: f64, hi: f64 },

    /// Adaptive quadrature hit the node cap before successive estimates agreed.
    #[error(
        "quadrature did not converge within {max_nodes} nodes per axis \
         (last estimates {previous:e} and {latest:e})"
    )]
    QuadratureAccuracy {
        previous: f64,
        latest: f64,
        max_nodes: usize,
    },

    /// Cholesky failed: the Gram matrix is not numerically positive definite.
    #[error("Gram matrix is numerically indefinite; try the orthonormal basis")]
    IndefiniteGram,

    #[error("range exceeded: {0}")]
    Range(String),

    #[error("unsupported dimension {actual}: {context}")]
    UnsupportedDimension { actual: usize, context: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to (1 usage, 2 numeric failure).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::Parse { .. }
            | Error::InvalidBox { .. }
            | Error::UnsupportedDimension { .. }
            | Error::Config(_) => 1,
            Error::QuadratureAccuracy { .. }
            | Error::IndefiniteGram
            | Error::Range(_)
            | Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
