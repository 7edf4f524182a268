use crate::error::{Error, Result};

/// Gauss-Radau coefficient `gamma_k^(mu)` with a prescribed node `mu`.
///
/// Starts from `gamma_0^(mu) = 1/mu`. When `mu > lambda_min` the recurrence
/// can produce `gamma_k^(mu) <= gamma_k`; `sign_ok` is then cleared for good,
/// the signed recurrence keeps running, and [`Self::gamma_mu`] reports the
/// magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussRadauState {
    mu: f64,
    k: usize,
    gamma_mu: f64,
    sign_ok: bool,
    /// Set after a zero denominator; the track stops there.
    degenerate: bool,
}

impl GaussRadauState {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Gauss-Radau node must be positive, got {mu:e}"
            )));
        }
        Ok(Self {
            mu,
            k: 0,
            gamma_mu: 1.0 / mu,
            sign_ok: true,
            degenerate: false,
        })
    }

    /// Advances `gamma_k^(mu) -> gamma_{k+1}^(mu)` from `gamma_k` and `delta_{k+1}`.
    pub fn update(&mut self, gamma: f64, delta_next: f64) -> Result<f64> {
        if self.degenerate {
            return Err(Error::DegenerateNode { iteration: self.k });
        }
        let diff = self.gamma_mu - gamma;
        if !(diff > 0.0) {
            self.sign_ok = false;
        }
        let denom = self.mu * diff + delta_next;
        if denom == 0.0 {
            self.degenerate = true;
            return Err(Error::DegenerateNode { iteration: self.k });
        }
        self.gamma_mu = diff / denom;
        self.k += 1;
        if !(self.gamma_mu > 0.0) {
            self.sign_ok = false;
        }
        Ok(self.gamma_mu())
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|gamma_k^(mu)|`.
    pub fn gamma_mu(&self) -> f64 {
        self.gamma_mu.abs()
    }

    /// The signed value carried by the recurrence.
    pub fn gamma_mu_signed(&self) -> f64 {
        self.gamma_mu
    }

    pub fn sign_ok(&self) -> bool {
        self.sign_ok
    }

    pub fn degenerate(&self) -> bool {
        self.degenerate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_value() {
        let s = GaussRadauState::new(4.0).unwrap();
        assert_eq!(s.gamma_mu(), 0.25);
        assert!(s.sign_ok());
        assert!(GaussRadauState::new(0.0).is_err());
    }

    #[test]
    fn hand_step() {
        let mut s = GaussRadauState::new(0.5).unwrap();
        // (2 - 1) / (0.5 * 1 + 0.5) = 1
        assert_eq!(s.update(1.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn sign_loss_is_sticky() {
        // diff = 1 - 2 = -1, gamma_1 = -1 / (-1 + 0.5) = 2 > 0 yet tainted
        let mut s = GaussRadauState::new(1.0).unwrap();
        let g = s.update(2.0, 0.5).unwrap();
        assert!(!s.sign_ok());
        assert_eq!(g, 2.0);
        s.update(1.0, 2.0).unwrap();
        assert_eq!(s.gamma_mu_signed(), 1.0 / 3.0);
        assert!(!s.sign_ok());
        s.update(-10.0, 0.5).unwrap();
        assert!(!s.sign_ok());
    }

    #[test]
    fn zero_denominator() {
        // diff = 1 - 2 = -1, denom = 1 * -1 + 1 = 0
        let mut s = GaussRadauState::new(1.0).unwrap();
        assert!(matches!(s.update(2.0, 1.0), Err(Error::DegenerateNode { iteration: 0 })));
        assert!(s.degenerate());
        assert!(s.update(0.1, 0.1).is_err());
    }
}
