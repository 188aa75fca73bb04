//! Error type shared across the crate.
//!
//! Construction errors (bad pmfs, mismatched alphabets) and domain errors
//! (unsupported orders, gains failing a required hypothesis set) are kept
//! separate from internal invariant violations: the former are caller
//! mistakes, the latter indicate a bug and map to a distinct process exit
//! code in the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative mass {value:e} at index {index}")]
    NegativeMass { index: usize, value: f64 },

    #[error("total mass {sum} is not 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("conditioning on zero-probability outcome {0:?}")]
    ZeroMarginal(String),

    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("invalid gain function: {0}")]
    InvalidGain(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid guess count: {0}")]
    InvalidGuessCount(String),

    #[error("inadmissible strategy: {0}")]
    InadmissibleStrategy(String),

    #[error("strategy decomposition stalled: {0}")]
    DecompositionStall(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("oracle input too large: {0}")]
    OracleTooLarge(String),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("validation error: {0}")]
    ValidationError(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag for structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyAlphabet => "empty_alphabet",
            Error::DuplicateSymbol(_) => "duplicate_symbol",
            Error::UnknownSymbol(_) => "unknown_symbol",
            Error::AlphabetMismatch(_) => "alphabet_mismatch",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::NegativeMass { .. } => "negative_mass",
            Error::NotNormalized { .. } => "not_normalized",
            Error::ZeroMarginal(_) => "zero_marginal",
            Error::UnsupportedOrder(_) => "unsupported_order",
            Error::InvalidGain(_) => "invalid_gain",
            Error::DomainError(_) => "domain_error",
            Error::InvalidGuessCount(_) => "invalid_guess_count",
            Error::InadmissibleStrategy(_) => "inadmissible_strategy",
            Error::DecompositionStall(_) => "decomposition_stall",
            Error::InvalidSplit(_) => "invalid_split",
            Error::OracleTooLarge(_) => "oracle_too_large",
            Error::ParseError(_) => "parse_error",
            Error::ValidationError(_) => "validation_error",
            Error::Internal(_) => "internal",
        }
    }

    /// True for errors that indicate a bug in this crate rather than bad
    /// caller input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
