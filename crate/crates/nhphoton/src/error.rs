use thiserror::Error;

/// Errors shared across the crate.
///
/// Numerical routines report *why* they cannot produce a trustworthy number
/// instead of silently returning garbage: evaluation on top of a spectral
/// curve, ambiguous root selection on a branch cut, non-converged iterations
/// and malformed model documents all get their own variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("model is malformed: {0}")]
    BadModel(String),

    #[error("coherent hopping table is not Hermitian: offset {offset:?} entry ({to},{from}) vs its transpose differ by {dev:.3e}")]
    NotHermitian {
        offset: Vec<i64>,
        to: usize,
        from: usize,
        dev: f64,
    },

    #[error("operation needs a Hermitian model (no jump channels, real spectrum): {0}")]
    HermitianRequired(String),

    #[error("emitter {index} is invalid: {reason}")]
    BadEmitter { index: usize, reason: String },

    #[error("z = {re:.6e}{im:+.6e}i is within {dist:.3e} of the Bloch spectrum (offending k index {k_index})")]
    ResolventSingularity {
        re: f64,
        im: f64,
        dist: f64,
        k_index: usize,
    },

    #[error("root selection is ambiguous at z = {re:.6e}{im:+.6e}i: | |y| - 1 | = {margin:.3e} is inside the guard band")]
    BranchAmbiguity { re: f64, im: f64, margin: f64 },

    #[error("operation not available for this model: {0}")]
    Unsupported(String),

    #[error("winding number did not converge to an integer: value {value:.6e} at grid {grid}")]
    WindingNotInteger { value: f64, grid: usize },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("stationary-phase approximation breaks down: {0}")]
    SpaBreakdown(String),

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
