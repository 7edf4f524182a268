/// `xi_k`, the squared norm of `x_k - x_0` (the M-norm under PCG), from the
/// recurrences
///
/// ```text
/// theta_{k+1} = theta_k + gamma_k / phi_k
/// xi_{k+1}    = xi_k + psi_k (theta_{k+1} + theta_k)
/// ```
///
/// `phi_k` is taken from the shared [`crate::quad::PhiState`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct XiState {
    k: usize,
    theta: f64,
    xi: f64,
}

impl XiState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances `k -> k + 1` from `gamma_k`, `psi_k` and `phi_k`.
    pub fn update(&mut self, gamma: f64, psi: f64, phi: f64) -> f64 {
        let theta_next = self.theta + gamma / phi;
        self.xi += psi * (theta_next + self.theta);
        self.theta = theta_next;
        self.k += 1;
        self.xi
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Cross term for a nonzero initial guess:
/// `||x_k||^2 = ||x_0||^2 + 2 C_k + xi_k`, with `C_k = x_0^T (x_k - x_0)`
/// (M-inner product under PCG).
///
/// Since `p_j = rnorm2_j * sum_{i<=j} z_i / rnorm2_i`, the cross term is
/// `C_{k+1} = C_k + psi_k W_k` where `W_k = sum_{i<=k} x_0^T r_i / rnorm2_i`.
/// Costs one inner product `x_0^T r_k` per iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct X0Correction {
    x0_norm2: f64,
    w: f64,
    cross: f64,
}

impl X0Correction {
    /// `x0_norm2` is `||x_0||^2` (or `||x_0||_M^2`); the other two inputs
    /// describe `r_0`.
    pub fn new(x0_norm2: f64, x0_dot_r0: f64, rnorm2_0: f64) -> Self {
        Self {
            x0_norm2,
            w: x0_dot_r0 / rnorm2_0,
            cross: 0.0,
        }
    }

    /// Advances with `psi_{k-1}` and the new residual's `x_0^T r_k`, `rnorm2_k`.
    pub fn update(&mut self, psi_prev: f64, x0_dot_r: f64, rnorm2: f64) {
        self.cross += psi_prev * self.w;
        if rnorm2 > 0.0 {
            self.w += x0_dot_r / rnorm2;
        }
    }

    pub fn cross_term(&self) -> f64 {
        self.cross
    }

    /// Estimate of `||x_k||^2` given `xi_k`.
    pub fn norm2_estimate(&self, xi: f64) -> f64 {
        self.x0_norm2 + 2.0 * self.cross + xi
    }
}
