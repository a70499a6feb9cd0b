use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid channel spec: {0}")]
    InvalidSpec(String),

    #[error("quadrature did not converge: estimate {estimate}, error {error} after {subdivisions} subdivisions")]
    NoConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("function does not integrate to 1 (got {integral})")]
    NotADensity { integral: f64 },

    #[error("expectation diverged or is not finite: {0}")]
    NonFinite(String),

    #[error("tail event has zero probability")]
    EmptyTail,

    #[error("sigma profile is not monotone; the psi transform is undefined")]
    NonMonotoneSigma,

    #[error("function is not increasing: {0}")]
    NotIncreasing(String),

    #[error("function is not convex: {0}")]
    NotConvex(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("unsupported constraint combination: {0}")]
    UnsupportedConstraintCombination(String),

    #[error("support is unbounded; truncate it before discretizing")]
    UnboundedSupport,

    #[error("packing recurrence could not bracket a solution at step {index}")]
    StepFailed { index: usize },

    #[error("blahut-arimoto did not reach the duality-gap tolerance in {max_iter} iterations")]
    BaNoConvergence { max_iter: usize },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
