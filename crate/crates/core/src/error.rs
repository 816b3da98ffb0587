use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `k` outside `1..=n-1` (or a `k` range that does not fit the sample).
    #[error("k = {k} out of range for a sample of size {n} (need 1 <= k <= n-1)")]
    Range { k: usize, n: usize },

    /// A value outside the mathematical domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tuning parameter outside its admissible set.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Fewer than two usable observations after truncation.
    #[error("degenerate sample: {kept} usable observations out of {drawn} drawn")]
    DegenerateSample { drawn: usize, kept: usize },

    /// The requested computation is not available for this input class.
    #[error("unsupported: {0}")]
    Capability(String),

    #[error("curve has no defined entries")]
    EmptyCurve,

    /// Too few replications were defined at the selected optimal level.
    #[error("only {defined} of {replications} replications defined at k = {k}")]
    InsufficientCoverage {
        k: usize,
        defined: usize,
        replications: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
