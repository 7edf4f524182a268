use std::collections::VecDeque;

use super::GaussRadauState;
use crate::error::{Error, Result};

/// Gauss-Radau bound together with the sign flag of the node recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadauBound {
    pub value: f64,
    /// Set when the recurrence lost its sign, i.e. `mu` behaved like a node
    /// above the smallest eigenvalue; `value` then uses `|gamma^(mu)|`.
    pub tainted: bool,
}

/// `(rnorm2_k / mu_k) * phi_k`, the tail term of the approximate
/// Gauss-Radau estimate. `mu_k` is the current smallest-Ritz estimate; the
/// result is an estimate, not a bound.
pub fn approx_upper(phi: f64, rnorm2: f64, mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("node must be positive, got {mu:e}")));
    }
    Ok(rnorm2 / mu * phi)
}

/// The last `d + 1` quadrature weights `psi_j`, enough to emit every delayed
/// bound for delay `d`.
///
/// Window sums are always re-summed left to right from the oldest index.
/// A running sum with subtraction would be cheaper but makes bounds for
/// different delays round differently.
#[derive(Debug, Clone)]
pub struct BoundLedger {
    delay: usize,
    ring: VecDeque<(usize, f64)>,
    next: usize,
}

impl BoundLedger {
    pub fn new(delay: usize) -> Self {
        Self {
            delay,
            ring: VecDeque::with_capacity(delay + 1),
            next: 0,
        }
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// Number of weights pushed so far.
    pub fn len(&self) -> usize {
        self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    /// Appends `psi_j`; indices must arrive in order from 0.
    pub fn push_psi(&mut self, j: usize, psi: f64) -> Result<()> {
        if j != self.next {
            return Err(Error::InvalidArgument(format!(
                "expected psi_{}, got psi_{j}",
                self.next
            )));
        }
        if !(psi >= 0.0 && psi.is_finite()) {
            return Err(Error::InvalidArgument(format!("psi_{j} = {psi:e} is not a valid weight")));
        }
        if self.ring.len() == self.delay + 1 {
            self.ring.pop_front();
        }
        self.ring.push_back((j, psi));
        self.next += 1;
        Ok(())
    }

    /// `sum_{j=k}^{k+len-1} psi_j`, summed left to right.
    pub fn window_sum(&self, k: usize, len: usize) -> Result<f64> {
        if k + len > self.next {
            return Err(Error::NotReady("delay window not yet filled"));
        }
        let Some(&(first, _)) = self.ring.front() else {
            return Ok(0.0);
        };
        if len > 0 && k < first {
            return Err(Error::NotReady("delay window already evicted"));
        }
        let mut sum = 0.0;
        for &(_, psi) in self.ring.iter().skip(k.saturating_sub(first)).take(len) {
            sum += psi;
        }
        Ok(sum)
    }

    /// `sum_{j=k}^{k+d-1} psi_j`.
    pub fn partial_sum(&self, k: usize) -> Result<f64> {
        self.window_sum(k, self.delay)
    }

    /// Gauss lower bound for `||x - x_k||_A^2` from `gamma_{k+d}` and `rnorm2_{k+d}`.
    pub fn gauss_lower(&self, k: usize, gamma_kd: f64, rnorm2_kd: f64) -> Result<f64> {
        if k + self.delay + 1 > self.next {
            return Err(Error::NotReady("gamma_{k+d} not yet available"));
        }
        Ok(self.partial_sum(k)? + gamma_kd * rnorm2_kd)
    }

    /// Gauss-Radau upper bound for `||x - x_k||_A^2`; `gr` must sit at index `k + d`.
    pub fn gauss_radau_upper(&self, k: usize, gr: &GaussRadauState, rnorm2_kd: f64) -> Result<RadauBound> {
        if gr.k() != k + self.delay {
            return Err(Error::InvalidArgument(format!(
                "Gauss-Radau state is at {}, bound for {k} needs {}",
                gr.k(),
                k + self.delay
            )));
        }
        Ok(RadauBound {
            value: self.partial_sum(k)? + gr.gamma_mu() * rnorm2_kd,
            tainted: !gr.sign_ok(),
        })
    }

    /// Upper bound `sum + rnorm2_{k+d} phi_{k+d} / mu`, valid for `mu <= lambda_min`.
    pub fn new_upper(&self, k: usize, phi_kd: f64, rnorm2_kd: f64, mu: f64) -> Result<f64> {
        if !(mu > 0.0) {
            return Err(Error::InvalidArgument(format!("node must be positive, got {mu:e}")));
        }
        Ok(self.partial_sum(k)? + rnorm2_kd / mu * phi_kd)
    }

    /// Delayed approximate bound with the Ritz-based node `mu_{k+d}`.
    pub fn approx_upper(&self, k: usize, phi_kd: f64, rnorm2_kd: f64, mu_kd: f64) -> Result<f64> {
        Ok(self.partial_sum(k)? + approx_upper(phi_kd, rnorm2_kd, mu_kd)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filled(delay: usize, psis: &[f64]) -> BoundLedger {
        let mut l = BoundLedger::new(delay);
        for (j, &p) in psis.iter().enumerate() {
            l.push_psi(j, p).unwrap();
        }
        l
    }

    #[test]
    fn zero_delay_reduces_to_single_terms() {
        let l = filled(0, &[]);
        assert!(l.gauss_lower(0, 0.5, 2.0).is_err());
        let l = filled(0, &[1.0]);
        assert_eq!(l.gauss_lower(0, 0.5, 2.0).unwrap(), 1.0);
        let gr = GaussRadauState::new(2.0).unwrap();
        let b = l.gauss_radau_upper(0, &gr, 3.0).unwrap();
        assert_eq!(b.value, 1.5);
        assert!(!b.tainted);
        assert_eq!(l.new_upper(0, 1.0, 3.0, 2.0).unwrap(), 1.5);
    }

    #[test]
    fn window_and_eviction() {
        let l = filled(2, &[1.0, 2.0, 4.0, 8.0, 16.0]);
        assert_eq!(l.partial_sum(3).unwrap(), 24.0);
        assert_eq!(l.window_sum(2, 3).unwrap(), 28.0);
        assert!(matches!(l.partial_sum(1), Err(Error::NotReady(_))));
        assert!(matches!(l.partial_sum(4), Err(Error::NotReady(_))));
    }

    #[test]
    fn out_of_order_push() {
        let mut l = BoundLedger::new(1);
        l.push_psi(0, 1.0).unwrap();
        assert!(l.push_psi(2, 1.0).is_err());
        assert!(l.push_psi(1, -1.0).is_err());
    }

    #[test]
    fn approx_matches_new_upper_at_same_node() {
        let l = filled(1, &[1.0, 0.5]);
        assert_eq!(
            l.approx_upper(0, 0.3, 0.2, 4.0).unwrap(),
            l.new_upper(0, 0.3, 0.2, 4.0).unwrap()
        );
        assert!(approx_upper(0.3, 0.2, 0.0).is_err());
    }
}
