use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation requires a non-empty word")]
    EmptyWord,
    #[error("{what} {value} out of range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("word {0} is not primitive")]
    NotPrimitive(String),
    #[error("word {0} is not a square")]
    NotSquare(String),
    #[error("word {0} is not a Lyndon word")]
    NotLyndon(String),
    #[error("{0} is not a factor of {1}")]
    NotAFactor(String, String),
    #[error("word {word} has no square with Lyndon root {root}")]
    NoSquares { word: String, root: String },
    #[error("Lyndon root {root} has no circuit in CS of {word}")]
    EmptyCircuitSet { word: String, root: String },
    #[error("arc {0} is not in the arc index")]
    UnknownArc(String),
    #[error("vector dimension {found} does not match {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid letter {0:#04x} in input")]
    InvalidLetter(u8),
    #[error("invalid hex input: {0}")]
    InvalidHex(String),
    #[error("census limit exceeded: {0}")]
    Resource(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("verification failed: {0}")]
    CheckFailed(String),
    #[error("numeric precision exhausted evaluating {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
