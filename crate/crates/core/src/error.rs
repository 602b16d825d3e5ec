//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by evaluation, codecs, classifiers, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// An intermediate value left the domain of the map being applied
    /// (negative radicand, division by zero, nonpositive logarithm argument, …).
    #[error("DomainError: {0}")]
    Domain(String),

    /// An intermediate value exceeded the representable range.
    #[error("OverflowError: {0}")]
    Overflow(String),

    /// An iterative process hit its depth/iteration budget with deltas still
    /// above tolerance. The payload describes how far it got.
    #[error("NoConvergence: {0}")]
    NoConvergence(String),

    /// A criterion requiring nonnegative terms saw a negative addend.
    #[error("NegativeTerm: addend at index {index} is negative")]
    NegativeTerm { index: u64 },

    /// A per-term exponent fell outside the range the criterion accepts.
    #[error("ExponentOutOfRange: {0}")]
    ExponentOutOfRange(String),

    /// The caller did not certify the hypotheses a criterion assumes.
    #[error("HypothesisNotCertified: {0}")]
    HypothesisNotCertified(String),

    /// Fixed-point refinement failed to locate a root.
    #[error("NoFixedPointLocated: {0}")]
    NoFixedPointLocated(String),

    /// Digit extraction could no longer distinguish which side of an integer
    /// boundary the residual lies on at the working precision.
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),

    /// An unbounded digit exceeded the supported integer range.
    #[error("DigitOverflow: {0}")]
    DigitOverflow(String),

    /// Requested constant is not in the registry.
    #[error("UnknownConstant: {0}")]
    UnknownConstant(String),

    /// Newton mode was requested but the map supplies no derivative.
    #[error("DerivativeUnavailable: {0}")]
    DerivativeUnavailable(String),

    /// Malformed term-stream / corpus / CLI specification text.
    #[error("ParseError: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
