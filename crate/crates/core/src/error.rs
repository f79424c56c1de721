use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse group spec {0:?}")]
    SpecParse(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("operands live on different groups ({0} vs {1})")]
    GroupMismatch(String, String),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("empty function family")]
    EmptyFamily,

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group too small: construction needs |G| >= {required}, got {actual}")]
    GroupTooSmall { required: u128, actual: usize },

    #[error("no suitable group element: {0}")]
    MissingElement(String),

    #[error("singular linear system")]
    Singular,

    #[error("synthesis verification failed: {0}")]
    SynthVerification(String),

    #[error("witness for dichotomy {labels:?} does not re-verify")]
    WitnessRejected { labels: Vec<i8> },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
