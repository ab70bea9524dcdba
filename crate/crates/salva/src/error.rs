use crate::checkers::CheckReport;

/// Errors shared across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("duplicate symbol '{0}' in alphabet")]
    DuplicateSymbol(char),
    #[error("symbol '{0}' is not in the alphabet")]
    SymbolOutsideAlphabet(char),
    #[error("symbol index {0} is outside the alphabet")]
    SymbolIndexOutOfRange(u8),
    #[error("string length {len} is outside the admissible range for horizon {horizon}")]
    LengthExceedsHorizon { len: usize, horizon: usize },
    #[error("the empty string is not admissible")]
    EmptyString,
    #[error("horizon must be a positive integer")]
    InvalidHorizon,
    #[error("string \"{s}\" is listed with two meanings: {first} and {second}")]
    DuplicateStringConflict {
        s: String,
        first: String,
        second: String,
    },
    #[error("invalid state action: {0}")]
    InvalidAction(String),
    #[error("oracle inconsistent: \"{0}\" is a member but has no interpretation")]
    OracleInconsistent(String),
    #[error("string \"{0}\" is not well-formed")]
    NotWellFormed(String),
    #[error("precondition not met: {property}")]
    PreconditionNotMet {
        property: String,
        report: Option<Box<CheckReport>>,
    },
    #[error("predicate passes on the input language")]
    PredicatePassesOnInput,
    #[error("generation exhausted after {0} attempts")]
    GenerationExhausted(u32),
    #[error("an explicit-table language is required here")]
    ExplicitBackendRequired,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
