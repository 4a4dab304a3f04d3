use thiserror::Error;

/// Errors raised by the numerical kernels and the verification layers above them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {location}: |denominator| = {magnitude:.3e}")]
    Pole { location: String, magnitude: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("limit did not converge: {0}")]
    Limit(String),
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    #[error("calibration error: {0}")]
    Calibration(String),
    #[error("expansion refused: {0}")]
    Expansion(String),
    #[error("singular operator: {0}")]
    Singular(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, EllError>;
