use nalgebra::{DMatrix, DVector};

use super::compensated::residual2;
use super::{check_limit, DEFAULT_VERIFY_LIMIT};
use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

const REFINEMENT_STEPS: usize = 3;

/// Exact solution of `A x = b` from a dense Cholesky factorization, for
/// measuring true A-norm errors.
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    a: DMatrix<f64>,
    x: Vec<f64>,
}

impl ReferenceSolution {
    pub fn new(a: &SparseSymMatrix, b: &[f64]) -> Result<Self> {
        Self::with_limit(a, b, DEFAULT_VERIFY_LIMIT)
    }

    pub fn with_limit(a: &SparseSymMatrix, b: &[f64], limit: usize) -> Result<Self> {
        let n = a.n();
        check_limit(n, limit)?;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let dense = DMatrix::from_row_slice(n, n, &a.to_dense());
        let chol = dense
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Oracle("dense Cholesky failed: matrix is not SPD".into()))?;
        let mut x = chol.solve(&DVector::from_column_slice(b)).as_slice().to_vec();
        // refinement with residuals in doubled precision brings x to full
        // working accuracy regardless of the condition number
        for _ in 0..REFINEMENT_STEPS {
            let r = residual2(a, b, &x);
            let dx = chol.solve(&DVector::from_vec(r));
            for (xi, di) in x.iter_mut().zip(dx.iter()) {
                *xi += di;
            }
        }
        Ok(Self { a: dense, x })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// `||x - x_k||_A`.
    pub fn error_anorm(&self, xk: &[f64]) -> f64 {
        self.error_anorm2(xk).sqrt()
    }

    /// `||x - x_k||_A^2`.
    pub fn error_anorm2(&self, xk: &[f64]) -> f64 {
        let e = DVector::from_iterator(self.x.len(), self.x.iter().zip(xk).map(|(x, y)| x - y));
        e.dot(&(&self.a * &e)).max(0.0)
    }

    /// `||x_k||_M^2` for a dense row-major `M`; plain squared norm when `None`.
    pub fn norm2_in(&self, xk: &[f64], m: Option<&DMatrix<f64>>) -> f64 {
        let v = DVector::from_column_slice(xk);
        match m {
            Some(m) => v.dot(&(m * &v)),
            None => v.dot(&v),
        }
    }
}

/// `||x - x_k||_A` with `x` from a fresh dense solve.
pub fn true_error_anorm(a: &SparseSymMatrix, b: &[f64], xk: &[f64]) -> Result<f64> {
    Ok(ReferenceSolution::new(a, b)?.error_anorm(xk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_errors() {
        let a = crate::generators::tridiagonal(6, 3.0, -1.0);
        let b = [1.0, 0.0, 2.0, -1.0, 0.5, 1.0];
        let r = ReferenceSolution::new(&a, &b).unwrap();
        assert_eq!(r.error_anorm(r.x()), 0.0);
        let btab: f64 = b.iter().zip(r.x()).map(|(p, q)| p * q).sum();
        assert!((r.error_anorm(&[0.0; 6]) - btab.sqrt()).abs() < 1e-14 * btab.sqrt());
    }
}
