use super::{two_by_two_eigmax, TwoByTwoEig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncNormMode {
    /// Estimates `||B_k||^2`.
    Forward,
    /// Estimates `||B_k^{-1}||^2`.
    Inverse,
}

/// Scalars of the incremental norm estimator for a growing upper bidiagonal
/// `B_k` (diagonal `alpha`, superdiagonal `beta`).
///
/// The estimate is `rho_k = ||M_k z_k||^2` for a unit vector `z_k` grown as
/// `z_{k+1} = (s_k z_k, c_k)`, with `M_k = B_k` or `B_k^{-1}`. Only `(rho,
/// sigma, tau, s, c)` are kept; the vector itself is never formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncNormState {
    mode: IncNormMode,
    k: usize,
    rho: f64,
    sigma: f64,
    tau: f64,
    s: f64,
    c: f64,
}

impl IncNormState {
    /// `rho_1 = alpha_1^2`.
    pub fn forward(alpha1: f64) -> Self {
        Self::from_rho(IncNormMode::Forward, alpha1 * alpha1)
    }

    /// `rho_1 = alpha_1^{-2}`, `tau_0 = rho_1`.
    pub fn inverse(alpha1: f64) -> Result<Self> {
        if alpha1 == 0.0 {
            return Err(Error::SingularBidiagonal { index: 1 });
        }
        Ok(Self::from_rho(IncNormMode::Inverse, 1.0 / (alpha1 * alpha1)))
    }

    /// Starts from a known `rho_1`; used by the CG form, where `rho_1` is
    /// `1/gamma_0` or `gamma_0` without a square root.
    pub(crate) fn from_rho(mode: IncNormMode, rho1: f64) -> Self {
        Self {
            mode,
            k: 1,
            rho: rho1,
            sigma: 0.0,
            tau: match mode {
                IncNormMode::Forward => 0.0,
                IncNormMode::Inverse => rho1,
            },
            s: 0.0,
            c: 1.0,
        }
    }

    /// Appends column `k + 1` of `B`: `beta_k` above the diagonal and
    /// `alpha_{k+1}` on it. `alpha_k` is the current last diagonal entry.
    pub fn step(&mut self, alpha_k: f64, beta_k: f64, alpha_k1: f64) -> Result<TwoByTwoEig> {
        let (sigma, tau) = match self.mode {
            IncNormMode::Forward => (alpha_k * beta_k * self.c, beta_k * beta_k + alpha_k1 * alpha_k1),
            IncNormMode::Inverse => {
                if alpha_k1 == 0.0 {
                    return Err(Error::SingularBidiagonal { index: self.k + 1 });
                }
                let ratio = beta_k / alpha_k1;
                (
                    -ratio * (self.s * self.sigma + self.c * self.tau),
                    (beta_k * beta_k * self.tau + 1.0) / (alpha_k1 * alpha_k1),
                )
            }
        };
        Ok(self.absorb(sigma, tau))
    }

    /// Solves the 2x2 problem `[[rho, sigma], [sigma, tau]]` and moves to `k + 1`.
    pub(crate) fn absorb(&mut self, sigma: f64, tau: f64) -> TwoByTwoEig {
        let eig = two_by_two_eigmax(self.rho, sigma, tau);
        self.rho += eig.gain();
        self.sigma = sigma;
        self.tau = tau;
        self.s = eig.s;
        self.c = eig.c;
        self.k += 1;
        eig
    }

    pub fn mode(&self) -> IncNormMode {
        self.mode
    }

    /// Order of the bidiagonal processed so far.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Current squared-norm estimate.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `rho` for the forward mode, `1/rho` for the inverse mode: the
    /// estimate of the largest or smallest eigenvalue of `B^T B`.
    pub fn eigenvalue_estimate(&self) -> f64 {
        match self.mode {
            IncNormMode::Forward => self.rho,
            IncNormMode::Inverse => 1.0 / self.rho,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Inverse mode: `||B_k^{-1} e_k||^2`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}
