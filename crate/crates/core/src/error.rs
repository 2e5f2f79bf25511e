use thiserror::Error;

use crate::channel::RegimeKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("name `{0}` is already defined in the scene")]
    DuplicateName(String),

    #[error("variable set `{0}` is empty")]
    EmptySet(&'static str),

    #[error("variable `{0}` appears in more than one argument set")]
    OverlappingSets(String),

    #[error("coefficient vector of `{name}` has length {got}, basis has {expected}")]
    LengthMismatch { name: String, expected: usize, got: usize },

    /// Joint covariance is singular: the variables are linearly dependent and
    /// their differential entropy is minus infinity.
    #[error("degenerate covariance for {{{}}}", .0.join(", "))]
    Degenerate(Vec<String>),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("a Z-interference channel requires b = 0 (got b = {0})")]
    InvalidZic(f64),

    #[error("power split P1'' = {p1_doubleprime} outside [0, {p1}]")]
    BadSplit { p1_doubleprime: f64, p1: f64 },

    #[error("operation requires regime {expected}, parameters classify as {}", found.as_str())]
    WrongRegime { expected: &'static str, found: RegimeKind },

    #[error("coefficient denominator {0:e} is numerically zero")]
    SingularDenominator(f64),

    #[error(
        "strong IC ordering P1+a^2P2+1 <= b^2P1+P2+1 violated ({lhs} > {rhs}); \
         swap the transmitter indices and retry"
    )]
    OrderingViolated { lhs: f64, rhs: f64 },

    #[error("auxiliary `{aux}` loads on `{element}`, outside its allowed factorization")]
    BadFactorization { aux: String, element: String },

    /// The decodability gate I(V;U1,Y1) <= I(V;Y2) failed; `slack` is rhs - lhs.
    #[error("decodability gate violated: I(V;U1,Y1) = {lhs} > I(V;Y2) = {rhs} (slack {slack})")]
    GateViolated { lhs: f64, rhs: f64, slack: f64 },

    #[error("entropy and mutual-information forms of `{condition}` disagree by {diff:e}")]
    InconsistentForms { condition: String, diff: f64 },
}

impl Error {
    /// Stable machine-readable identifier used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::DuplicateName(_) => "DuplicateName",
            Error::EmptySet(_) => "EmptySet",
            Error::OverlappingSets(_) => "OverlappingSets",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::Degenerate(_) => "Degenerate",
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidZic(_) => "InvalidZIC",
            Error::BadSplit { .. } => "BadSplit",
            Error::WrongRegime { .. } => "WrongRegime",
            Error::SingularDenominator(_) => "SingularDenominator",
            Error::OrderingViolated { .. } => "OrderingViolated",
            Error::BadFactorization { .. } => "BadFactorization",
            Error::GateViolated { .. } => "GateViolated",
            Error::InconsistentForms { .. } => "InconsistentForms",
        }
    }
}
