use thiserror::Error;

/// Coarse classification used by callers that map failures to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller asked for something invalid (bad parameters, bad state).
    Usage,
    /// The request is valid but exceeds an exact-computation limit.
    Capacity,
    /// An internal consistency check failed (bad policy output, wrong
    /// relevant list, non-monotone input where monotone was promised).
    Integrity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("state has arity {state} but the function expects {function}")]
    ArityMismatch { state: usize, function: usize },

    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("duplicate index {0}")]
    DuplicateIndex(usize),

    #[error("bit {0} is already 1")]
    AlreadyOne(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed family spec `{spec}`: {reason}")]
    MalformedSpec { spec: String, reason: String },

    #[error("unknown family kind `{0}`")]
    UnknownFamily(String),

    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),

    #[error("policy `{policy}` requires a graph-backed function, got `{function}`")]
    PolicyIncompatible { policy: String, function: String },

    #[error("the function is already active at the given state")]
    ActiveState,

    #[error("arity {arity} exceeds the limit {limit} for {what}")]
    Capacity {
        arity: usize,
        limit: usize,
        what: &'static str,
    },

    #[error(
        "relevant list is too small: fills of the dropped coordinates disagree \
         on a probe input"
    )]
    ContractionTooSmall,

    #[error("policy returned index {0}, which is not in the proposal")]
    ChoiceOutsideProposal(usize),

    #[error("policy returned an empty preference class")]
    EmptyPreference,

    #[error("{what} must satisfy {constraint}")]
    OrderingViolated {
        what: &'static str,
        constraint: &'static str,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Capacity { .. } => ErrorKind::Capacity,
            Error::ContractionTooSmall
            | Error::ChoiceOutsideProposal(_)
            | Error::EmptyPreference => ErrorKind::Integrity,
            _ => ErrorKind::Usage,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
