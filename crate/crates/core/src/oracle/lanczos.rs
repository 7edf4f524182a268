use super::{check_limit, DEFAULT_VERIFY_LIMIT};
use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

/// Output of the plain Lanczos process: basis vectors and `T_k`.
#[derive(Debug, Clone)]
pub struct LanczosRun {
    /// `v_1, ..., v_k`.
    pub vectors: Vec<Vec<f64>>,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// `k` steps of the Lanczos three-term recurrence from `v_1 = r0 / ||r0||`,
/// with no reorthogonalization. Independent of the CG code path: it uses
/// its own loops, not the crate's dot product or matvec.
pub fn explicit_lanczos(a: &SparseSymMatrix, r0: &[f64], k: usize) -> Result<LanczosRun> {
    let n = a.n();
    check_limit(n, DEFAULT_VERIFY_LIMIT)?;
    if r0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r0.len(),
        });
    }
    let dense = a.to_dense();
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| dense[i * n + j] * v[j]).sum()).collect()
    };
    let ip = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };

    let norm = ip(r0, r0).sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateStart);
    }
    let mut vectors = vec![r0.iter().map(|v| v / norm).collect::<Vec<f64>>()];
    let mut prev = vec![0.0; n];
    let mut beta_prev = 0.0;
    let mut diag = Vec::with_capacity(k);
    let mut off = Vec::with_capacity(k);
    for j in 0..k {
        let v = &vectors[j];
        let mut w = apply(v);
        for i in 0..n {
            w[i] -= beta_prev * prev[i];
        }
        let alpha = ip(&w, v);
        for i in 0..n {
            w[i] -= alpha * v[i];
        }
        diag.push(alpha);
        if j + 1 == k {
            break;
        }
        let beta = ip(&w, &w).sqrt();
        if beta == 0.0 {
            return Err(Error::Oracle(format!("Lanczos terminated at step {}", j + 1)));
        }
        off.push(beta);
        prev = v.clone();
        beta_prev = beta;
        vectors.push(w.iter().map(|x| x / beta).collect());
    }
    Ok(LanczosRun { vectors, diag, off })
}
