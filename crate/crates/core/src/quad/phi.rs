use crate::error::{Error, Result};

/// `phi_k = phi_{k-1} / (phi_{k-1} + delta_k)`.
pub fn update_phi(phi_prev: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta:e}"
        )));
    }
    if !(phi_prev > 0.0 && phi_prev <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "phi must lie in (0, 1], got {phi_prev:e}"
        )));
    }
    Ok(phi_prev / (phi_prev + delta))
}

/// Running ratio `phi_k = ||r_k||^2 / ||p_k||^2`, with `phi_0 = 1`.
///
/// `rnorm2_k * phi_k` is the squared residual norm of the minimal residual
/// iterate, `(sum_{j<=k} ||r_j||^{-2})^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiState {
    k: usize,
    phi: f64,
}

impl Default for PhiState {
    fn default() -> Self {
        Self::new()
    }
}

impl PhiState {
    pub fn new() -> Self {
        Self { k: 0, phi: 1.0 }
    }

    /// Advances with `delta_{k+1}`.
    pub fn update(&mut self, delta: f64) -> Result<f64> {
        self.phi = update_phi(self.phi, delta).map_err(|_| Error::NegativeDelta {
            iteration: self.k + 1,
            delta,
        })?;
        self.k += 1;
        Ok(self.phi)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}
