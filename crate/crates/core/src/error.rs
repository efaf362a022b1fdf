use thiserror::Error;

use crate::catmap::ResidualMap;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("tensor product of size {rows}x{cols} exceeds the configured maximum {max}")]
    SizeOverflow { rows: usize, cols: usize, max: usize },

    #[error("operator is not unitary: max |A·A† − I| = {deviation:e} > {tolerance:e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("index ({q}, {p}) out of range for grid of side {side}")]
    IndexOutOfRange { q: usize, p: usize, side: usize },

    #[error("program has no nonzero coefficients")]
    DegenerateProgram,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue {value} of T({b},{a}) is {distance:e} away from the nearest exp(iπc/N)")]
    EigenphaseAmbiguity {
        b: usize,
        a: usize,
        value: num_complex::Complex64,
        distance: f64,
    },

    #[error("cat map (b={b}, c={c}) is not exactly covariant for N={n}: residual {max_residual:e}")]
    NotCovariant {
        n: usize,
        b: usize,
        c: usize,
        max_residual: f64,
        residuals: Box<ResidualMap>,
    },

    #[error("{}", parse_location(.path, *.line, .message))]
    Parse {
        path: Option<String>,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_location(path: &Option<String>, line: usize, message: &str) -> String {
    match path {
        Some(path) if line > 0 => format!("{path}:{line}: {message}"),
        Some(path) => format!("{path}: {message}"),
        None if line > 0 => format!("line {line}: {message}"),
        None => message.to_string(),
    }
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            message: message.into(),
        }
    }

    /// Attaches a file path to a parse error; other variants pass through.
    pub fn with_path(self, path: impl Into<String>) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                path: Some(path.into()),
                line,
                message,
            },
            other => other,
        }
    }
}
