use thiserror::Error;

/// Errors surfaced by the library.
///
/// Partition failures always name an offending edge so that a bad input file
/// or a buggy construction can be located without re-running the search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cycle ({a},{b},{c},{d}): vertices must be four distinct labels >= 1")]
    InvalidCycle { a: u8, b: u8, c: u8, d: u8 },

    #[error("vertex {label} out of range 1..={n}")]
    OutOfRange { label: u8, n: u8 },

    #[error("not a decomposition: edge {{{u},{v}}} is covered {count} times")]
    NotADecomposition { u: u8, v: u8, count: usize },

    #[error("invalid trade: {reason}")]
    InvalidTrade { reason: String },

    #[error("built-in table row {row} failed validation: {source}")]
    TableRowInvalid {
        row: String,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported: {what}")]
    Unsupported { what: String },

    #[error("order {n} too small (need n >= {min})")]
    TooSmall { n: u8, min: u8 },

    #[error("internal inconsistency: {what}")]
    InternalInconsistency { what: String },

    #[error("invalid input: {what}")]
    InvalidInput { what: String },

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
