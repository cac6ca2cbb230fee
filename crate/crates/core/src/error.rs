use thiserror::Error;

/// Errors raised by the numerical kernels and the model layers built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// An intermediate exceeded the representable floating-point range.
    #[error("overflow in {op}: {detail}")]
    Overflow { op: &'static str, detail: String },

    /// A finite enumeration would exceed the configured term budget.
    #[error("term budget exceeded in {op}: {needed} terms > cap {cap}")]
    Budget { op: &'static str, needed: u128, cap: u128 },

    /// An iterative method stopped before reaching its tolerance.
    #[error("no convergence in {op}: best estimate {estimate:e}, error bound {bound:e}")]
    NoConvergence { op: &'static str, estimate: f64, bound: f64 },

    /// Malformed input data, e.g. a molecule table row.
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
