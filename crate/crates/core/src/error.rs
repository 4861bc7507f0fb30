use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid pattern {text:?}: {reason}")]
    PatternSyntax { text: String, reason: String },

    #[error("letter 0 is not allowed; letters start at 1")]
    ZeroLetter,

    #[error("invalid word {text:?}: {reason}")]
    WordSyntax { text: String, reason: String },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("line {line}: {reason}")]
    MorphismParse { line: usize, reason: String },

    #[error("morphism does not satisfy the uniformity preconditions: {}", .0.join("; "))]
    NotUniform(Vec<String>),

    #[error("phi^{n}(1) would have {predicted} letters, above the cap of {cap}")]
    CapExceeded { n: u32, predicted: u128, cap: usize },

    #[error("closed forms are defined for n >= {min}, got n = {n}")]
    IterationOutOfRange { n: u32, min: u32 },

    #[error("pattern {pattern} is not supported here: {reason}")]
    UnsupportedPattern { pattern: String, reason: String },

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}
