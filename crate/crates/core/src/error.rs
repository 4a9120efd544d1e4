use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree mismatch: function has degree {function}, grid supports {grid}")]
    DegreeMismatch { function: usize, grid: usize },
    #[error("unsupported discriminant {d}: {reason}")]
    Discriminant { d: i64, reason: String },
    #[error("eigenvalue labels not simple after the full tie-break ladder at degree {0}")]
    NonSimpleSpectrum(usize),
    #[error("insufficient coefficients: need {need}, have {have}")]
    InsufficientCoefficients { need: usize, have: usize },
    #[error("pole proximity: gamma argument {0} too close to a nonpositive integer")]
    PoleProximity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
