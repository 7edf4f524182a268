use super::{IncNormMode, IncNormState};
use crate::cg::IterationRecord;
use crate::error::{Error, Result};

/// Extreme Ritz value estimates for `T_k` after CG record `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RitzEstimate {
    pub k: usize,
    /// Lower estimate of `lambda_max(T_k)`.
    pub rho_max: f64,
    /// Upper estimate of `lambda_min(T_k)`.
    pub rho_min: f64,
}

/// Both incremental estimators fed directly with CG coefficients.
///
/// Uses the substituted forms, so no square roots of `gamma` or `delta`
/// enter the forward `tau` or either starting value. Holds a fixed number of
/// scalars.
#[derive(Debug, Clone, Copy, Default)]
pub struct RitzTracker {
    fwd: Option<IncNormState>,
    inv: Option<IncNormState>,
    gamma_prev: f64,
    delta_prev: f64,
    k: usize,
}

impl RitzTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consumes record `k` (carrying `gamma_{k-1}` and `delta_k`) and
    /// returns estimates for `T_k`.
    pub fn push(&mut self, record: &IterationRecord) -> Result<RitzEstimate> {
        if record.k != self.k + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected record {}, got {}",
                self.k + 1,
                record.k
            )));
        }
        let gamma = record.gamma;
        if !(gamma > 0.0) {
            return Err(Error::SingularBidiagonal { index: record.k });
        }
        match (self.fwd.as_mut(), self.inv.as_mut()) {
            (Some(fwd), Some(inv)) => {
                // step k-1 appends column k: needs gamma_{k-2}, delta_{k-1}, gamma_{k-1}
                let (gp, dp) = (self.gamma_prev, self.delta_prev);
                if !(dp >= 0.0) {
                    return Err(Error::NegativeDelta {
                        iteration: record.k - 1,
                        delta: dp,
                    });
                }
                fwd.absorb(dp.sqrt() / gp * fwd.c(), 1.0 / gamma + dp / gp);
                let ratio = (gamma * dp / gp).sqrt();
                inv.absorb(
                    -ratio * (inv.s() * inv.sigma() + inv.c() * inv.tau()),
                    gamma * (dp * inv.tau() / gp + 1.0),
                );
            }
            _ => {
                self.fwd = Some(IncNormState::from_rho(IncNormMode::Forward, 1.0 / gamma));
                self.inv = Some(IncNormState::from_rho(IncNormMode::Inverse, gamma));
            }
        }
        self.gamma_prev = gamma;
        self.delta_prev = record.delta;
        self.k = record.k;
        Ok(self.estimate().expect("initialised above"))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn estimate(&self) -> Option<RitzEstimate> {
        Some(RitzEstimate {
            k: self.k,
            rho_max: self.fwd?.eigenvalue_estimate(),
            rho_min: self.inv?.eigenvalue_estimate(),
        })
    }

    pub fn forward(&self) -> Option<&IncNormState> {
        self.fwd.as_ref()
    }

    pub fn inverse(&self) -> Option<&IncNormState> {
        self.inv.as_ref()
    }

    /// `tau_{k-1} / gamma_{k-1}` from the inverse recurrence, which equals
    /// `||p_{k-1}||^2 / ||r_{k-1}||^2` in exact arithmetic.
    pub fn tau_over_gamma(&self) -> Option<f64> {
        Some(self.inv?.tau() / self.gamma_prev)
    }
}
