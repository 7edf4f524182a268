use thiserror::Error;

/// Errors raised anywhere in the solver, estimator, and oracle stack.
///
/// Variants raised while iterating carry the CG iteration index at which the
/// problem was detected.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("matrix market parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported matrix market format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incomplete Cholesky breakdown: pivot {pivot:e} at row {row}")]
    PivotFailure { row: usize, pivot: f64 },

    #[error("matrix is not positive definite: p'Ap = {curvature:e} at iteration {iteration}")]
    NotPositiveDefinite { iteration: usize, curvature: f64 },

    #[error("preconditioner is not positive definite: z'r = {value:e} at iteration {iteration}")]
    PreconditionerNotPositiveDefinite { iteration: usize, value: f64 },

    #[error("initial residual is zero; nothing to iterate on")]
    DegenerateStart,

    #[error("solver already converged at iteration {iteration}")]
    AlreadyConverged { iteration: usize },

    #[error("negative coefficient delta = {delta:e} at iteration {iteration}")]
    NegativeDelta { iteration: usize, delta: f64 },

    #[error("Gauss-Radau recurrence hit a zero denominator at iteration {iteration}")]
    DegenerateNode { iteration: usize },

    #[error("singular bidiagonal: zero diagonal entry at position {index}")]
    SingularBidiagonal { index: usize },

    #[error("estimate not ready: {0}")]
    NotReady(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("order {n} exceeds the dense verification limit {limit}")]
    VerifyLimit { n: usize, limit: usize },

    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
