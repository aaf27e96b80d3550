use thiserror::Error;

pub type Result<T> = std::result::Result<T, DropError>;

#[derive(Debug, Error)]
pub enum DropError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state became non-finite at r = {r}")]
    NonFiniteState { r: f64 },

    #[error("sample limit of {max} exceeded at r = {r}")]
    SampleLimit { max: usize, r: f64 },

    #[error("r = {r} is outside the profile range [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error(
        "fixed-point iteration did not converge after {iterations} sweeps (last change {change:e})"
    )]
    NoConvergence { iterations: usize, change: f64 },

    #[error("could not bracket the shooting parameter: {0}")]
    BracketFailure(String),

    #[error("comparison ordering violated at r = {r}: {detail}")]
    OrderingViolated { r: f64, detail: String },

    #[error("closed-form volume {closed} and quadrature {quadrature} disagree")]
    VolumeMismatch { closed: f64, quadrature: f64 },

    #[error("r = {r} lies beyond the first maximum r_M = {r_max_drop}")]
    BeyondMaxDrop { r: f64, r_max_drop: f64 },

    #[error("profile is not pendent (kappa = {kappa}, u0 = {u0})")]
    NotPendent { kappa: f64, u0: f64 },

    #[error("two {kind} features at r = {a} and r = {b} are closer than the resolution")]
    FeatureTooClose { kind: &'static str, a: f64, b: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
