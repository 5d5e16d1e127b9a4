use thiserror::Error;

/// Failures reported by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("inconsistent field: relative round-trip error {0:e}")]
    InconsistentField(f64),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("dyadic block j={0} is not representable on this grid")]
    BlockNotRepresentable(i32),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("negative samples are not allowed here (min {0:e})")]
    NegativeSamples(f64),
    #[error("input is not radial: {0}")]
    NotRadial(String),
    #[error("too few usable shells for a fit: {found} < {required}")]
    TooFewShells { found: usize, required: usize },
    #[error("scheme violation at step {step}: {detail}")]
    SchemeViolation { step: usize, detail: String },
    #[error("missing norm table entries: {0:?}")]
    MissingEntries(Vec<String>),
    #[error("container: {0}")]
    Container(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
