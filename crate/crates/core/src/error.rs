use thiserror::Error;

use crate::ring::RingDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("series is exactly zero")]
    ZeroSeries,
    #[error("substitution diverges: inner series must have positive valuation")]
    SubstituteDiverges,
    #[error("hyperelliptic polynomial must be monic")]
    NotMonic,
    #[error("hyperelliptic polynomial must be squarefree")]
    NotSquarefree,
    #[error("hyperelliptic polynomial must have degree at least 3")]
    DegreeTooSmall,
    #[error("loop is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("inconsistent pole data: {0}")]
    InconsistentPoleData(String),
    #[error("leading coefficient has no rational square root: {0}")]
    NoRationalSquareRoot(String),
    #[error("odd valuation {0}: no square root in Laurent series")]
    OddValuation(i64),
    #[error("form is singular along the loop")]
    FormSingularAlongLoop,
    #[error("unsupported point pair: {0}")]
    UnsupportedPointPair(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("permutation size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("enumeration too large: {0} assignments")]
    TooLarge(u128),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
