use nalgebra::{DMatrix, SymmetricEigen};

use super::compensated::rayleigh_quotient;
use super::{check_limit, DEFAULT_VERIFY_LIMIT};
use crate::error::{Error, Result};
use crate::sparse::{Preconditioner, PreconditionerKind, SparseSymMatrix};

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSym {
    /// Fails unless `entries` is `n x n` and symmetric to `1e-14` relative.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let scale = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (entries[i * n + j] - entries[j * n + i]).abs() > 1e-14 * scale {
                    return Err(Error::InvalidMatrix(format!("dense matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_sparse(a: &SparseSymMatrix) -> Self {
        Self {
            n: a.n(),
            entries: a.to_dense(),
        }
    }

    /// Symmetric tridiagonal with the given diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if off.len() + 1 != n.max(1) {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                found: off.len(),
            });
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = diag[i];
            if i + 1 < n {
                entries[i * n + i + 1] = off[i];
                entries[(i + 1) * n + i] = off[i];
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries)
    }

    fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        // symmetrize to wash out roundoff of the products that built `m`
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| 0.5 * (m[(i, j)] + m[(j, i)]))
            .collect();
        Self { n, entries }
    }
}

/// Ascending eigenvalues and matching eigenvectors (columns), with the
/// residual check `||T q - lambda q|| <= 1e-10 ||T||`.
pub fn dense_eigen_decomposition(t: &DenseSym, limit: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_limit(t.n, limit)?;
    if t.n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let m = t.to_matrix();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Oracle("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..t.n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(t.n, t.n, |r, c| eig.eigenvectors[(r, order[c])]);
    let norm = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for (c, &lambda) in values.iter().enumerate() {
        let q = vectors.column(c);
        let res = (&m * q - q * lambda).norm();
        if res > 1e-10 * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::Oracle(format!(
                "eigenpair {c} residual {res:e} exceeds tolerance"
            )));
        }
    }
    Ok((values, vectors))
}

pub fn dense_eigs_with_limit(t: &DenseSym, limit: usize) -> Result<Vec<f64>> {
    Ok(dense_eigen_decomposition(t, limit)?.0)
}

/// All eigenvalues in ascending order.
pub fn dense_eigs(t: &DenseSym) -> Result<Vec<f64>> {
    dense_eigs_with_limit(t, DEFAULT_VERIFY_LIMIT)
}

pub fn tridiagonal_eigs(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    dense_eigs(&DenseSym::tridiagonal(diag, off)?)
}

/// `(lambda_min, lambda_max)` of a sparse matrix.
///
/// The dense eigensolver is only accurate to about `eps ||A||`; the values
/// returned are compensated Rayleigh quotients of its extreme eigenvectors,
/// so that `lambda_min` carries a relative rather than absolute error.
pub fn extreme_eigenvalues(a: &SparseSymMatrix) -> Result<(f64, f64)> {
    let (_, q) = dense_eigen_decomposition(&DenseSym::from_sparse(a), DEFAULT_VERIFY_LIMIT)?;
    let n = a.n();
    if n == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    let column = |c: usize| q.column(c).iter().copied().collect::<Vec<f64>>();
    Ok((rayleigh_quotient(a, &column(0)), rayleigh_quotient(a, &column(n - 1))))
}

/// Right-hand side with equal components in the eigenvector basis of `A`
/// and unit norm: `b = Q 1 / sqrt(n)`.
pub fn eigen_equal_rhs(a: &SparseSymMatrix) -> Result<Vec<f64>> {
    let (_, q) = dense_eigen_decomposition(&DenseSym::from_sparse(a), DEFAULT_VERIFY_LIMIT)?;
    let n = a.n();
    let w = 1.0 / (n as f64).sqrt();
    Ok((0..n).map(|i| q.row(i).iter().sum::<f64>() * w).collect())
}

/// `(sigma_max, sigma_min)` of the upper bidiagonal with diagonal `alphas`
/// and superdiagonal `betas`, from a dense SVD.
pub fn dense_extreme_singular(alphas: &[f64], betas: &[f64]) -> Result<(f64, f64)> {
    let n = alphas.len();
    if n == 0 || betas.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: betas.len(),
        });
    }
    check_limit(n, DEFAULT_VERIFY_LIMIT)?;
    let b = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alphas[i]
        } else if j == i + 1 {
            betas[i]
        } else {
            0.0
        }
    });
    let sv = b
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Oracle("SVD did not converge".into()))?
        .singular_values;
    let max = sv.iter().fold(0.0f64, |m, v| m.max(*v));
    let min = sv.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    Ok((max, min))
}

/// The operator seen by PCG, `L^{-1} A L^{-T}` with `M = L L^T`, formed densely.
pub fn preconditioned_operator(a: &SparseSymMatrix, m: &Preconditioner) -> Result<DenseSym> {
    let n = a.n();
    check_limit(n, DEFAULT_VERIFY_LIMIT)?;
    let dense = DMatrix::from_row_slice(n, n, &a.to_dense());
    let result = match m.kind() {
        PreconditionerKind::None => dense,
        PreconditionerKind::Jacobi => {
            let s: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d.sqrt()).collect();
            DMatrix::from_fn(n, n, |i, j| s[i] * dense[(i, j)] * s[j])
        }
        PreconditionerKind::Ic0 => {
            let factor = m.ic0_factor().expect("ic0 preconditioner has a factor");
            let l = DMatrix::from_row_slice(n, n, &factor.to_dense());
            let left = l
                .solve_lower_triangular(&dense)
                .ok_or_else(|| Error::Oracle("singular incomplete factor".into()))?;
            // (L^{-1} (L^{-1} A)^T)^T = L^{-1} A L^{-T}
            l.solve_lower_triangular(&left.transpose())
                .ok_or_else(|| Error::Oracle("singular incomplete factor".into()))?
                .transpose()
        }
    };
    Ok(DenseSym::from_matrix(&result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spectrum() {
        let t = DenseSym::tridiagonal(&[3.0, 1.0, 2.0], &[0.0, 0.0]).unwrap();
        let e = dense_eigs(&t).unwrap();
        for (a, b) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_values() {
        let (max, min) = dense_extreme_singular(&[2.0, 3.0], &[0.0]).unwrap();
        assert!((max - 3.0).abs() < 1e-15 && (min - 2.0).abs() < 1e-15);
        let (max, _) = dense_extreme_singular(&[1.0, 1.0], &[1.0]).unwrap();
        assert!((max * max - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        assert!(DenseSym::new(2, vec![1.0, 2.0, 3.0, 1.0]).is_err());
        let t = DenseSym::tridiagonal(&[1.0; 5], &[0.5; 4]).unwrap();
        assert!(matches!(dense_eigs_with_limit(&t, 4), Err(Error::VerifyLimit { n: 5, limit: 4 })));
    }
}
