//! Error taxonomy shared across the workbench.
//!
//! Exit-code mapping for the CLI: 2 = parse/schema, 3 = domain precondition,
//! 4 = internal consistency (a violated structural identity).

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("irrational spectrum: irreducible factor {factor}")]
    IrrationalSpectrum { factor: String },
    #[error("not Fuchsian at {point}: pole order {order}")]
    NotFuchsian { point: String, order: usize },
    #[error("stabilization failure: cohomology dims at consecutive truncation levels disagree ({detail})")]
    StabilizationFailure { detail: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("point collision: {0}")]
    PointCollision(String),
    #[error("not rank 2: rank is {0}")]
    NotRank2(usize),
    #[error("not irreducible: dim H0(End) = {0}")]
    NotIrreducible(usize),
    #[error("option error: {0}")]
    OptionError(String),
    #[error("config error: {0}")]
    ConfigError(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for report consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::Schema(_) => "schema",
            Error::DivisionByZero => "division-by-zero",
            Error::IrrationalSpectrum { .. } => "irrational-spectrum",
            Error::NotFuchsian { .. } => "not-fuchsian",
            Error::StabilizationFailure { .. } => "stabilization-failure",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::PointCollision(_) => "point-collision",
            Error::NotRank2(_) => "not-rank-2",
            Error::NotIrreducible(_) => "not-irreducible",
            Error::OptionError(_) => "option-error",
            Error::ConfigError(_) => "config-error",
            Error::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::Schema(_) | Error::OptionError(_) => 2,
            Error::Internal(_) | Error::StabilizationFailure { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
