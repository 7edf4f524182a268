/// Quantities available to a stopping test after iteration `k`.
///
/// Optional entries are `None` while the producing estimator is not ready.
#[derive(Debug, Clone, Copy)]
pub struct StopContext {
    pub k: usize,
    /// Euclidean norm of the recursive residual.
    pub residual_norm: f64,
    pub rhs_norm: f64,
    /// Cheap normwise backward error.
    pub backward_error: Option<f64>,
    /// Squared upper bound on `||x - x_j||_A^2` for the most recent index `j`
    /// it is available at.
    pub error_upper_sq: Option<f64>,
    /// `sum_{i<k} psi_i`, a lower bound on `||x - x_0||_A^2`.
    pub energy_sq: f64,
}

/// A convergence test. The iteration limit is always enforced separately.
pub trait StopRule: Send + Sync {
    fn should_stop(&self, ctx: &StopContext) -> bool;
}

/// Never stops; the iteration limit decides.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverStop;

impl StopRule for NeverStop {
    fn should_stop(&self, _: &StopContext) -> bool {
        false
    }
}

/// `||r_k|| <= tol * ||b||`.
#[derive(Debug, Clone, Copy)]
pub struct RelativeResidual(pub f64);

impl StopRule for RelativeResidual {
    fn should_stop(&self, ctx: &StopContext) -> bool {
        ctx.residual_norm <= self.0 * ctx.rhs_norm
    }
}

/// Cheap backward error below `tol`.
#[derive(Debug, Clone, Copy)]
pub struct BackwardError(pub f64);

impl StopRule for BackwardError {
    fn should_stop(&self, ctx: &StopContext) -> bool {
        ctx.backward_error.is_some_and(|eta| eta <= self.0)
    }
}

/// Relative A-norm error bound: `upper <= tol * ||x - x_0||_A`, using the
/// accumulated energy as a stand-in for the unknown initial error.
#[derive(Debug, Clone, Copy)]
pub struct ErrorBound(pub f64);

impl StopRule for ErrorBound {
    fn should_stop(&self, ctx: &StopContext) -> bool {
        ctx.error_upper_sq
            .is_some_and(|u| u <= self.0 * self.0 * ctx.energy_sq)
    }
}
