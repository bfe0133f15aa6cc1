use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid delta {0}: must be non-negative")]
    InvalidDelta(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration cap exceeded: {what} = {size} exceeds cap {cap}")]
    EnumerationCapExceeded { what: String, size: f64, cap: f64 },
    #[error("inducibility gap {gap} does not exceed delta {delta}")]
    GapTooSmall { gap: f64, delta: f64 },
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("no instance satisfying the constraints after {0} attempts")]
    RejectionCapExceeded(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no feasible candidate: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGame(_) => "invalid_game",
            Error::InvalidStrategy(_) => "invalid_strategy",
            Error::InvalidDelta(_) => "invalid_delta",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::EnumerationCapExceeded { .. } => "enumeration_cap_exceeded",
            Error::GapTooSmall { .. } => "gap_too_small",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::UnknownCatalog(_) => "unknown_catalog",
            Error::RejectionCapExceeded(_) => "rejection_cap_exceeded",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::Infeasible(_) => "infeasible",
            Error::Lp(_) => "lp",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// Guard errors raised deliberately by solvers rather than by bad input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCapExceeded { .. }
                | Error::GapTooSmall { .. }
                | Error::BudgetExceeded(_)
                | Error::RejectionCapExceeded(_)
                | Error::PreconditionViolated(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
