use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: state has dim {state}, operator has dim {op}")]
    DimensionMismatch { state: usize, op: usize },

    #[error("state is not normalized: |psi|^2 = {norm_sq} (tolerance {tol:e})")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("strength must lie in [0, {max}], got {value}")]
    StrengthOutOfRange { value: f64, max: f64 },

    #[error("phase must be finite, got {0}")]
    NonFinitePhase(f64),

    #[error("requires Omega > omega > 0 (got Omega = {big}, omega = {small})")]
    NotNonDegenerate { big: f64, small: f64 },

    #[error("truncation N = {given} too small for tail tolerance {tol:e}; need N >= {required}")]
    TruncationTooSmall { given: usize, required: usize, tol: f64 },

    #[error("step dt = {dt} exceeds the resolution guard 0.1/Omega = {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("integration interval must be positive and finite, got {0}")]
    BadInterval(f64),

    #[error("non-finite {0}")]
    NonFiniteEntry(&'static str),

    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },
}
