use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("illegal Lerch point: {0}")]
    IllegalLerchPoint(String),
    #[error("theta series needs Im(tau) > 0")]
    NonconvergentTau,
    #[error("argument hits a pole: {0}")]
    PoleHit(String),
    #[error("contour quadrature did not stabilise after {doublings} doublings")]
    QuadratureNonconvergence { doublings: u32 },
    #[error("parameters outside the admissible cases: {0}")]
    CasePreconditionViolated(String),
    #[error("series did not converge before the truncation cap ({0})")]
    NonconvergenceAtPolicyCap(String),
    #[error("inadmissible parameters: {0}")]
    InadmissibleParameters(String),
    #[error("expression still depends on z")]
    SymbolRemains,
    #[error("q-series does not converge: {0}")]
    NonconvergentQSeries(String),
    #[error("parse error: {0}")]
    Parse(String),
}
