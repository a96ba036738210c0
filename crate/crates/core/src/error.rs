use thiserror::Error;

/// Everything that can go wrong while building or forcing a lazy structure.
///
/// Errors raised while a cell is being produced are memoized together with
/// the failing index, so re-reading the cell yields the same error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-productive definition: cell {index} was re-entered while being computed")]
    NonProductive { index: usize },

    #[error("stream forward reference was read before being bound (cell {index})")]
    Unbound { index: usize },

    #[error("finite stream exhausted at cell {index}")]
    Exhausted { index: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("series division: divisor has a zero leading coefficient")]
    LeadingZeroDivisor,

    #[error("series composition: inner series must have a zero constant term")]
    CompositionHead,

    #[error("series reversion: series must start 0 + 1·x")]
    ReversionForm,

    #[error("{op}: zero leading coefficient")]
    SingularHead { op: &'static str },

    #[error("tower division: pole (divisor vanishes, dividend does not)")]
    Pole,

    #[error("{op}: domain error: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
