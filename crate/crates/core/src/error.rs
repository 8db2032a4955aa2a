use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word must not be empty")]
    EmptyWord,
    #[error("word length {0} exceeds the maximum of {max}", max = crate::words::MAX_LEN)]
    WordTooLong(usize),
    #[error("invalid binary digit {0:?}")]
    InvalidDigit(char),
    #[error("bit index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension {d} outside the supported range {min}..={max}")]
    DimensionOutOfRange { d: usize, min: usize, max: usize },
    #[error("word {word} is not a vertex of the graph")]
    NotAVertex { word: String },
    #[error("{u} and {v} are not adjacent")]
    NotAnEdge { u: String, v: String },
    #[error("malformed graph6 text: {0}")]
    Graph6(String),
    #[error("canonical labeling exceeded its budget of {0} search nodes")]
    BudgetExceeded(u64),
    #[error("wall-clock budget of {0} s exceeded")]
    TimeBudgetExceeded(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("count overflows 64 bits")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
