use super::IterationRecord;
use crate::error::{Error, Result};

/// Lanczos/Jacobi-matrix coefficients recovered from one CG iteration.
///
/// `alpha_tilde`, `beta_tilde` are the diagonal and off-diagonal of `T_k`;
/// `alpha`, `beta` the entries of the upper bidiagonal Cholesky factor
/// `L_k^T` with `T_k = L_k L_k^T`. `beta_tilde` and `beta` belong to column
/// `k + 1`, i.e. they first appear in `T_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosCoeffs {
    pub k: usize,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Streaming map from CG coefficients to Lanczos coefficients, starting from
/// `delta_0 = 0`, `gamma_{-1} = 1`.
#[derive(Debug, Clone, Copy)]
pub struct LanczosMap {
    next_k: usize,
    gamma_prev: f64,
    delta_prev: f64,
    truncated: bool,
}

impl Default for LanczosMap {
    fn default() -> Self {
        Self::new()
    }
}

impl LanczosMap {
    pub fn new() -> Self {
        Self {
            next_k: 1,
            gamma_prev: 1.0,
            delta_prev: 0.0,
            truncated: false,
        }
    }

    /// True once a negative `delta` was seen; no further coefficients follow.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn push(&mut self, record: &IterationRecord) -> Result<LanczosCoeffs> {
        if self.truncated {
            return Err(Error::NegativeDelta {
                iteration: record.k,
                delta: record.delta,
            });
        }
        if record.k != self.next_k {
            return Err(Error::InvalidArgument(format!(
                "expected record {}, got {}",
                self.next_k, record.k
            )));
        }
        if record.delta < 0.0 {
            self.truncated = true;
            return Err(Error::NegativeDelta {
                iteration: record.k,
                delta: record.delta,
            });
        }
        let gamma = record.gamma;
        let coeffs = LanczosCoeffs {
            k: record.k,
            alpha_tilde: 1.0 / gamma + self.delta_prev / self.gamma_prev,
            beta_tilde: record.delta.sqrt() / gamma,
            alpha: 1.0 / gamma.sqrt(),
            beta: (record.delta / gamma).sqrt(),
        };
        self.gamma_prev = gamma;
        self.delta_prev = record.delta;
        self.next_k += 1;
        Ok(coeffs)
    }
}

/// Converts a record stream into Lanczos coefficients, stopping at the
/// first invalid record.
pub fn lanczos_coeffs(records: &[IterationRecord]) -> Result<Vec<LanczosCoeffs>> {
    let mut map = LanczosMap::new();
    records.iter().map(|r| map.push(r)).collect()
}

/// Diagonal and off-diagonal of `T_k` from the first `k` records.
pub fn jacobi_matrix(records: &[IterationRecord], k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let coeffs = lanczos_coeffs(&records[..k])?;
    let diag = coeffs.iter().map(|c| c.alpha_tilde).collect();
    let off = coeffs[..k.saturating_sub(1)].iter().map(|c| c.beta_tilde).collect();
    Ok((diag, off))
}

/// Entries of the upper bidiagonal `L_k^T` (`alphas` of length `k`,
/// `betas` of length `k - 1`) from the first `k` records.
pub fn cholesky_bidiagonal(records: &[IterationRecord], k: usize) -> (Vec<f64>, Vec<f64>) {
    let alphas = records[..k].iter().map(|r| 1.0 / r.gamma.sqrt()).collect();
    let betas = records[..k.saturating_sub(1)]
        .iter()
        .map(|r| (r.delta / r.gamma).sqrt())
        .collect();
    (alphas, betas)
}
