use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter fell outside its documented domain.
    #[error("parameter `{name}` = {value} is outside {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A matrix handed to a validating constructor is not a valid density
    /// matrix or effect operator.
    #[error("invalid operator: {0}")]
    InvalidOperator(&'static str),

    /// Event time indices must be at least 1 and strictly increasing.
    #[error("event time indices must be strictly increasing and at least 1")]
    InvalidEvent,

    /// An inequality term references a time index beyond the spec's range.
    #[error("inequality `{name}` references time index {index} > n_times = {n_times}")]
    IndexBeyondPlan {
        name: String,
        index: usize,
        n_times: usize,
    },

    /// Asked for the post-measurement state of an outcome that (almost)
    /// never occurs.
    #[error("conditioning on a null event (branch probability {probability:.3e})")]
    NullEvent { probability: f64 },

    /// No criterion is registered under this name.
    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),

    /// A number-of-times argument outside the supported range.
    #[error("n = {n} is outside the supported range ({expected})")]
    UnsupportedTimes { n: usize, expected: &'static str },

    /// The sharpness profile at the requested point is not monotone, so a
    /// single bisection root is not meaningful.
    #[error(
        "violation is not monotone in the sharpness parameter at this point; \
         scan the profile instead"
    )]
    NonMonotoneProfile,
}

pub type Result<T> = std::result::Result<T, Error>;
