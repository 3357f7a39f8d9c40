use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("type notation error: {0}")]
    TypeNotation(String),

    #[error("unknown base symbol `{0}` (declared alphabet: {1})")]
    UnknownBase(String, String),

    #[error("word `{0}` missing from lexicon")]
    MissingWord(String),

    #[error("space mismatch: expected {expected}, got {got}")]
    SpaceMismatch { expected: String, got: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("tensor data has {got} entries, shape requires {want}")]
    DataLength { got: usize, want: usize },

    #[error("non-finite tensor entry encountered in {0}")]
    NonFinite(String),

    #[error("spider materialization of {entries} entries exceeds budget of {budget}")]
    BudgetExceeded { entries: u128, budget: usize },

    #[error("invalid contraction network: {0}")]
    InvalidNetwork(String),

    #[error("undeclared name `{0}`")]
    UndeclaredName(String),

    #[error("index {index} outside universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("word `{0}` not present in co-occurrence statistics")]
    UnseenWord(String),

    #[error("basis size {requested} exceeds vocabulary size {vocabulary}")]
    BasisTooLarge { requested: usize, vocabulary: usize },

    #[error("cannot learn an ownership map from an empty pair list")]
    EmptyOwnershipPairs,

    #[error("vector store: {0}")]
    Store(String),

    #[error("file format error in {file}: {message}")]
    FileFormat { file: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
