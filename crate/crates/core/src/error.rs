use alloc::string::String;

/// Errors raised by parameter validation, strategies, attacks and checks.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter regime violated: {0}")]
    RegimeViolation(String),
    #[error("missing parameter `{0}` for this setting")]
    MissingField(&'static str),
    #[error("covering number of an empty set")]
    EmptySet,
    #[error("query {0} is not a cell endpoint of the belief grid")]
    QueryOffGrid(f64),
    #[error("attack needs at least one query")]
    EmptyTranscript,
    #[error("truncation {truncate} leaves no queries out of {len}")]
    InsufficientLength { truncate: usize, len: usize },
    #[error("query sequence shows no clone structure with {clones} clones")]
    NoCloneStructure { clones: usize },
    #[error("attack is not defined for this input: {0}")]
    UnsupportedAttack(&'static str),
    #[error("observed queries cannot be produced by the strategy for any target")]
    TranscriptMismatch,
    #[error("bound `{0}` is undefined at these parameters")]
    UndefinedBound(&'static str),
    #[error("no worked example named `{0}`")]
    ExampleNotFound(String),
}
