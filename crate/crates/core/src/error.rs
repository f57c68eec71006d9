use thiserror::Error;

/// Coarse grouping of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or invalid input.
    Validation,
    /// Input is valid but too ill-conditioned for the requested quantity.
    Conditioning,
    /// File system failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("trace is {re:.12} + {im:.3e}i, expected 1")]
    Trace { re: f64, im: f64 },

    #[error("operator is not positive semidefinite: smallest eigenvalue {eigenvalue:.6e}")]
    NotPositive { eigenvalue: f64 },

    #[error("spectral function requires non-negative spectrum, found eigenvalue {eigenvalue:.6e}")]
    Domain { eigenvalue: f64 },

    #[error("matrix is numerically singular: smallest/largest singular value ratio {ratio:.3e}")]
    Rank { ratio: f64 },

    #[error("{what} is too ill-conditioned: smallest eigenvalue {min_eigenvalue:.3e} (need > {threshold:.0e})")]
    Conditioning {
        what: String,
        min_eigenvalue: f64,
        threshold: f64,
    },

    #[error("POVM is incomplete: max |sum E_b - 1| = {residual:.3e}")]
    Incomplete { residual: f64 },

    #[error("POVM element {index} is not positive semidefinite: eigenvalue {eigenvalue:.6e}")]
    PovmElementNegative { index: usize, eigenvalue: f64 },

    #[error("POVM must have at least one element")]
    EmptyPovm,

    #[error("invalid probability distribution: {reason}")]
    Distribution { reason: String },

    #[error("divergence is infinite: outcome {index} has p = {p:.3e} but q = {q:.3e}")]
    DivergenceInfinite { index: usize, p: f64, q: f64 },

    #[error(
        "support violation at outcome {index}: weight {weight:.3e} on zero-probability outcome"
    )]
    Support { index: usize, weight: f64 },

    #[error("singular term at outcome {index}: {reason}")]
    Singularity { index: usize, reason: String },

    #[error("{field} = {value} is outside [{min}, {max}]")]
    Range {
        field: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{field}: {source}")]
    Field {
        field: String,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Rank { .. }
            | Error::Conditioning { .. }
            | Error::Singularity { .. }
            | Error::DivergenceInfinite { .. } => ErrorCategory::Conditioning,
            Error::Io { .. } => ErrorCategory::Io,
            Error::Field { source, .. } => source.category(),
            _ => ErrorCategory::Validation,
        }
    }

    pub(crate) fn in_field(self, field: impl Into<String>) -> Error {
        Error::Field {
            field: field.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Error {
        Error::Shape {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
