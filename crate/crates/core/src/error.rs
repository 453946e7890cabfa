use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the kernel. Validation failures carry enough context to
/// point at the offending row or axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability vector failed validation.
    InvalidDistribution { reason: String },
    /// Row `row` of a channel matrix is not a probability vector.
    InvalidChannelRow { row: usize, reason: String },
    /// Alphabet sizes of composed objects disagree.
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    /// An axis index is out of range or an axis set is malformed.
    InvalidAxes { reason: String },
    /// A sequence is empty or holds an out-of-range symbol.
    InvalidSequence { reason: String },
    /// A scalar parameter is outside its domain.
    InvalidParameter { name: &'static str, reason: String },
    /// A computation would exceed a configured size guard.
    BudgetExceeded { guard: &'static str, required: u128, limit: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDistribution { reason } => write!(f, "invalid distribution: {reason}"),
            Error::InvalidChannelRow { row, reason } => {
                write!(f, "invalid channel row {row}: {reason}")
            }
            Error::DimensionMismatch { context, expected, found } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, found {found}")
            }
            Error::InvalidAxes { reason } => write!(f, "invalid axes: {reason}"),
            Error::InvalidSequence { reason } => write!(f, "invalid sequence: {reason}"),
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::BudgetExceeded { guard, required, limit } => {
                write!(f, "budget guard `{guard}` exceeded: requires {required}, limit {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for size-guard violations, which callers may want to report
    /// differently from malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
