//! Shared error type for all library operations.

use thiserror::Error;

/// Errors surfaced by library operations. Precondition violations that a caller
/// can trigger with well-formed but out-of-contract data are reported here
/// rather than panicking.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CasError {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("extension is not finite: {0}")]
    NotFinite(String),
    #[error("element is not algebraic over the base: {0}")]
    NotAlgebraic(String),
    #[error("prime decomposition unsupported for this ideal: {0}")]
    DecompositionUnsupported(String),
    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),
    #[error("saturation inconclusive: {0}")]
    SaturationInconclusive(String),
    #[error("contraction mismatch: {0}")]
    ContractionMismatch(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("expected a univariate polynomial: {0}")]
    NotUnivariate(String),
    #[error("ideal is the unit ideal where a proper ideal is required")]
    NotProper,
    #[error("{0}")]
    Unsupported(String),
}
