use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q must be positive and finite, got {0}")]
    InvalidQ(f64),
    #[error("k = {k} exceeds n = {n}")]
    KExceedsN { n: usize, k: usize },
    #[error("n = {n} is below the minimum {min}")]
    SizeTooSmall { n: usize, min: usize },
    #[error("n = {n} exceeds the enumeration budget {max}")]
    EnumerationBudget { n: usize, max: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("theta must lie in the open unit interval, got {0}")]
    ThetaOutOfRange(f64),
    #[error("t = {t} lies outside [{lo}, {hi}]")]
    TOutsideInterval { t: f64, lo: f64, hi: f64 },
    #[error("invalid four-square split: {0}")]
    InvalidSplit(String),
    #[error("counts sum to {sum}, expected n = {n}")]
    InconsistentCounts { sum: usize, n: usize },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid distribution function: {0}")]
    InvalidCdf(String),
    #[error("root finder did not converge after {iterations} iterations (last t = {last})")]
    NonConvergence { iterations: usize, last: f64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
