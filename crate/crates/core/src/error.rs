use thiserror::Error;

/// Every failure mode of the library. Variants are named after the
/// condition that was detected, so CLI output and FFI error codes can
/// report them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DivisionByZero: division by zero in F_q")]
    DivisionByZero,
    #[error("ZeroDivision: inverse of a zero series")]
    ZeroDivision,
    #[error("EmptyWindow: guaranteed output window is empty")]
    EmptyWindow,
    #[error("UndeterminedValuation: {0}")]
    UndeterminedValuation(String),
    #[error("NotAPthPower: witness {witness}")]
    NotAPthPower { witness: String },
    #[error("PrecisionLoss: {0}")]
    PrecisionLoss(String),
    #[error("LengthMismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("TwistViolation: {0}")]
    TwistViolation(String),
    #[error("FactorizationBudgetExceeded: degree {0} exceeds the factoring budget")]
    FactorizationBudgetExceeded(usize),
    #[error("InvalidContext: {0}")]
    InvalidContext(String),
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used for exit reports and FFI codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroDivision => "ZeroDivision",
            Error::EmptyWindow => "EmptyWindow",
            Error::UndeterminedValuation(_) => "UndeterminedValuation",
            Error::NotAPthPower { .. } => "NotAPthPower",
            Error::PrecisionLoss(_) => "PrecisionLoss",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TwistViolation(_) => "TwistViolation",
            Error::FactorizationBudgetExceeded(_) => "FactorizationBudgetExceeded",
            Error::InvalidContext(_) => "InvalidContext",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
