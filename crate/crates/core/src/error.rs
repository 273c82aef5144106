//! Error type shared by every stage of the pipeline.

use thiserror::Error;

use crate::exact::ExtendedRational;

/// Failures reported by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order is not determined below truncation {truncation}")]
    IndeterminateOrder { truncation: ExtendedRational },
    #[error("truncation {reached} is too short to certify the leading term")]
    TruncationTooShort { reached: String },
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("not a germ: {0}")]
    NotAGerm(String),
    #[error("arc exponent {0} is below one")]
    ExponentBelowOne(String),
    #[error("center lies outside the chart domain")]
    CenterOutsideDomain,
    #[error("resolution needed more than {0} blowups")]
    ResolutionBudgetExceeded(usize),
    #[error("normal form mismatch on component E{component}: {detail}")]
    NormalFormMismatch { component: usize, detail: String },
    #[error("oracle disagreement in {quantity}: formula {formula}, oracle {oracle}")]
    OracleDisagreement {
        quantity: String,
        formula: String,
        oracle: String,
    },
    #[error("invalid pizza document: {0}")]
    InvalidPizza(String),
}

pub type Result<T> = std::result::Result<T, Error>;
