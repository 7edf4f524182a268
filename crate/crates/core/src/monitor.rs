//! Online diagnostics: consumes the CG record stream and maintains one row
//! of estimates per iteration.

use crate::cg::IterationRecord;
use crate::error::{Error, Result};
use crate::quad::{BoundLedger, GaussRadauState, PhiState};
use crate::ritz::{BidiagonalFactor, RefineCadence, RitzTracker};
use crate::solnorm::{precond_backward_error, X0Correction, XiState};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MonitorConfig {
    /// Node for the Gauss-Radau and new upper bounds; `None` leaves both
    /// columns empty. The approximate bound always uses the Ritz estimate.
    pub mu: Option<f64>,
    pub delay: usize,
    /// Refined Ritz values; `None` disables the stored bidiagonal.
    pub refine: Option<RefineCadence>,
}

/// Data about `x_0` and `b` the monitor cannot derive from the records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartInfo {
    /// `||r_0||^2` (CG) or `z_0^T r_0` (PCG).
    pub rnorm2: f64,
    /// Euclidean `||r_0||`.
    pub residual_norm: f64,
    /// `b^T M^{-1} b` (`||b||^2` without preconditioning).
    pub rhs_minv_norm2: f64,
    /// `(||x_0||_M^2, x_0^T r_0)` for a nonzero initial guess; enables the
    /// cross-term correction, which then needs `x_0^T r_k` every iteration.
    pub x0: Option<(f64, f64)>,
}

impl StartInfo {
    pub fn zero_guess(rnorm2: f64, residual_norm: f64, rhs_minv_norm2: f64) -> Self {
        Self {
            rnorm2,
            residual_norm,
            rhs_minv_norm2,
            x0: None,
        }
    }
}

/// Estimates for one iteration. Error bounds are squared A-norms; delayed
/// entries are filled in `d` (lower bound: `d + 1`) iterations later.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimates {
    pub k: usize,
    pub residual_norm: f64,
    pub rnorm2: f64,
    pub gauss_lower: Option<f64>,
    pub gauss_radau_upper: Option<f64>,
    pub gauss_radau_tainted: bool,
    pub new_upper: Option<f64>,
    pub approx_upper: Option<f64>,
    pub ritz_max: Option<f64>,
    pub ritz_min: Option<f64>,
    pub ritz_max_refined: Option<f64>,
    pub ritz_min_refined: Option<f64>,
    /// Set when a refinement was attempted but did not move the estimate
    /// outward (or the shifted solve failed); the refined columns then
    /// repeat the cheap values.
    pub refine_unimproved: bool,
    /// `phi_k = ||r_k||^2 / ||p_k||^2` from the recurrence.
    pub phi: f64,
    /// Estimate of `||x_k||^2` (`||x_k||_M^2` under PCG).
    pub xnorm2: f64,
    /// Cheap normwise backward error of the (preconditioned) system.
    pub backward_error: Option<f64>,
}

/// Ties every estimator to one record stream.
#[derive(Debug, Clone)]
pub struct Monitor {
    config: MonitorConfig,
    start: StartInfo,
    ledger: BoundLedger,
    phi: PhiState,
    radau: Option<GaussRadauState>,
    radau_sign_lost: Option<usize>,
    radau_degenerate: Option<usize>,
    ritz: RitzTracker,
    factor: Option<BidiagonalFactor>,
    xi: XiState,
    x0: Option<X0Correction>,
    rows: Vec<Estimates>,
    /// `rnorm2_{k-1}` for the record about to arrive.
    rnorm2_prev: f64,
    /// `gamma_{k-1}` and `delta_k` of the last record.
    gamma_prev: f64,
    delta_prev: f64,
    energy: f64,
}

impl Monitor {
    pub fn new(config: MonitorConfig, start: StartInfo) -> Result<Self> {
        if !(start.rnorm2 > 0.0) {
            return Err(Error::DegenerateStart);
        }
        let radau = config.mu.map(GaussRadauState::new).transpose()?;
        let mut monitor = Self {
            config,
            start,
            ledger: BoundLedger::new(config.delay),
            phi: PhiState::new(),
            radau,
            radau_sign_lost: None,
            radau_degenerate: None,
            ritz: RitzTracker::new(),
            factor: None,
            xi: XiState::new(),
            x0: start.x0.map(|(n2, dot)| X0Correction::new(n2, dot, start.rnorm2)),
            rows: Vec::new(),
            rnorm2_prev: start.rnorm2,
            gamma_prev: f64::NAN,
            delta_prev: f64::NAN,
            energy: 0.0,
        };
        let xnorm2 = monitor.xnorm2();
        monitor.rows.push(Estimates {
            k: 0,
            residual_norm: start.residual_norm,
            rnorm2: start.rnorm2,
            phi: 1.0,
            xnorm2,
            backward_error: monitor.backward_error(start.rnorm2, None, xnorm2),
            ..Estimates::default()
        });
        monitor.emit_upper(0, start.rnorm2)?;
        Ok(monitor)
    }

    pub fn config(&self) -> &MonitorConfig {
        &self.config
    }

    pub fn rows(&self) -> &[Estimates] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Estimates> {
        self.rows
    }

    pub fn latest(&self) -> &Estimates {
        self.rows.last().expect("row 0 exists")
    }

    pub fn k(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn ritz(&self) -> &RitzTracker {
        &self.ritz
    }

    pub fn phi(&self) -> f64 {
        self.phi.phi()
    }

    pub fn xi(&self) -> &XiState {
        &self.xi
    }

    pub fn factor(&self) -> Option<&BidiagonalFactor> {
        self.factor.as_ref()
    }

    pub fn radau(&self) -> Option<&GaussRadauState> {
        self.radau.as_ref()
    }

    /// First iteration at which the Gauss-Radau recurrence lost its sign.
    pub fn radau_sign_lost_at(&self) -> Option<usize> {
        self.radau_sign_lost
    }

    /// Iteration at which the Gauss-Radau track stopped on a zero denominator.
    pub fn radau_degenerate_at(&self) -> Option<usize> {
        self.radau_degenerate
    }

    /// `sum_{j<k} psi_j`, the A-norm energy already removed from the error.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Most recent squared upper bound and the index it applies to.
    pub fn latest_upper(&self) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .rev()
            .find_map(|r| r.gauss_radau_upper.or(r.new_upper).map(|u| (r.k, u)))
    }

    fn xnorm2(&self) -> f64 {
        match &self.x0 {
            Some(c) => c.norm2_estimate(self.xi.xi()),
            None => self.xi.xi(),
        }
    }

    fn backward_error(&self, rnorm2: f64, rho_max: Option<f64>, xnorm2: f64) -> Option<f64> {
        let anorm = match rho_max {
            Some(r) => r,
            None if xnorm2 == 0.0 => 0.0,
            None => return None,
        };
        precond_backward_error(rnorm2, anorm, xnorm2, self.start.rhs_minv_norm2).ok()
    }

    /// Consumes record `k`. `x0_dot_r` is `x_0^T r_k`, required when the
    /// nonzero-start correction is active and ignored otherwise.
    pub fn push(&mut self, record: &IterationRecord, x0_dot_r: Option<f64>) -> Result<()> {
        let k = record.k;
        if k != self.rows.len() {
            return Err(Error::InvalidArgument(format!(
                "expected record {}, got {k}",
                self.rows.len()
            )));
        }
        let converged = record.rnorm2 == 0.0;

        // x_k-norm estimate uses gamma_{k-1}, psi_{k-1}, phi_{k-1}
        self.xi.update(record.gamma, record.psi, self.phi.phi());
        if let Some(c) = self.x0.as_mut() {
            let dot = x0_dot_r.ok_or(Error::NotReady("x0^T r_k is required by the x0 correction"))?;
            c.update(record.psi, dot, record.rnorm2);
        }
        self.energy += record.psi;
        self.ledger.push_psi(k - 1, record.psi)?;

        if !converged {
            self.phi.update(record.delta)?;
        }
        if let Some(gr) = self.radau.as_mut() {
            match gr.update(record.gamma, record.delta) {
                Ok(_) => {
                    if !gr.sign_ok() && self.radau_sign_lost.is_none() {
                        self.radau_sign_lost = Some(k);
                    }
                }
                Err(Error::DegenerateNode { .. }) => {
                    self.radau_degenerate = Some(k);
                    self.radau = None;
                }
                Err(e) => return Err(e),
            }
        }

        let ritz = self.ritz.push(record)?;
        if self.config.refine.is_some() {
            match self.factor.as_mut() {
                None => self.factor = Some(BidiagonalFactor::from_gamma(record.gamma)?),
                Some(f) => f.push_cg(self.gamma_prev, self.delta_prev, record.gamma)?,
            }
        }
        self.gamma_prev = record.gamma;
        self.delta_prev = record.delta;

        let xnorm2 = self.xnorm2();
        self.rows.push(Estimates {
            k,
            residual_norm: record.residual_norm,
            rnorm2: record.rnorm2,
            ritz_max: Some(ritz.rho_max),
            ritz_min: Some(ritz.rho_min),
            phi: self.phi.phi(),
            xnorm2,
            backward_error: self.backward_error(record.rnorm2, Some(ritz.rho_max), xnorm2),
            ..Estimates::default()
        });
        if self.config.refine.is_some_and(|c| c.due(k)) {
            self.refine_latest();
        }

        // lower bound for k - d - 1 needs gamma_{k-1} and rnorm2_{k-1}
        if let Some(j) = k.checked_sub(self.config.delay + 1) {
            let lower = self.ledger.gauss_lower(j, record.gamma, self.rnorm2_prev)?;
            self.rows[j].gauss_lower = Some(lower);
        }
        self.emit_upper(k, record.rnorm2)?;
        self.rnorm2_prev = record.rnorm2;
        Ok(())
    }

    /// Upper-type bounds for `k - d`, whose tail terms live at index `k`.
    fn emit_upper(&mut self, k: usize, rnorm2: f64) -> Result<()> {
        let Some(j) = k.checked_sub(self.config.delay) else {
            return Ok(());
        };
        let phi = self.phi.phi();
        if let Some(mu) = self.config.mu {
            if let Some(gr) = &self.radau {
                let b = self.ledger.gauss_radau_upper(j, gr, rnorm2)?;
                self.rows[j].gauss_radau_upper = Some(b.value);
                self.rows[j].gauss_radau_tainted = b.tainted;
            }
            self.rows[j].new_upper = Some(self.ledger.new_upper(j, phi, rnorm2, mu)?);
        }
        if let Some(est) = self.ritz.estimate() {
            self.rows[j].approx_upper = Some(self.ledger.approx_upper(j, phi, rnorm2, est.rho_min)?);
        }
        Ok(())
    }

    /// Runs the scheduled final refinement, if any. Call once after the last record.
    pub fn finish(&mut self) {
        if self.config.refine == Some(RefineCadence::FinalOnly)
            || self
                .config
                .refine
                .is_some_and(|c| self.latest().ritz_max_refined.is_none() && !c.due(self.k()))
        {
            self.refine_latest();
        }
    }

    fn refine_latest(&mut self) {
        let (Some(factor), Some(est)) = (self.factor.as_ref(), self.ritz.estimate()) else {
            return;
        };
        let max = factor.refine_max(factor.rho_max()).map(|r| r.value);
        let min = factor.refine_min(factor.rho_min()).map(|r| r.value);
        let row = self.rows.last_mut().expect("row exists");
        let mut unimproved = false;
        row.ritz_max_refined = Some(match max {
            Ok(v) if v >= est.rho_max => v,
            _ => {
                unimproved = true;
                est.rho_max
            }
        });
        row.ritz_min_refined = Some(match min {
            Ok(v) if v <= est.rho_min => v,
            _ => {
                unimproved = true;
                est.rho_min
            }
        });
        row.refine_unimproved = unimproved;
    }
}
