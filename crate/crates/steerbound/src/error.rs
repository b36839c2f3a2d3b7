//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by construction, validation, and parsing routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Requested a measurement set size with no regular-solid realization.
    #[error("unsupported measurement-set size {0}; expected one of 2, 3, 4, 6, 10")]
    UnsupportedSetSize(usize),

    /// Axis list failed one of the measurement-set invariants.
    #[error("invalid measurement axes: {0}")]
    InvalidAxes(String),

    /// A scalar parameter fell outside its documented domain.
    #[error("parameter {name} = {value} out of range; expected {requirement}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A response plan contained an illegal entry or had the wrong length.
    #[error("invalid response plan: {0}")]
    InvalidPlan(String),

    /// Requested a non-null count outside 1..=n.
    #[error("non-null count {m} out of range for a set of {n} measurements")]
    PlanSizeOutOfRange { m: usize, n: usize },

    /// An efficiency grid was empty, unordered, or out of (0, 1].
    #[error("invalid efficiency grid: {0}")]
    InvalidGrid(String),

    /// A simulation scenario failed validation.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A setting collected no scored trials, so its conditional mean is undefined.
    #[error("setting {setting} received no scored trials; rerun with more trials")]
    NoScoredTrials { setting: usize },

    /// A serialized artifact could not be decoded.
    #[error("parse error in {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    /// An underlying read or write failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn parse(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Parse {
            what,
            detail: detail.into(),
        }
    }
}
