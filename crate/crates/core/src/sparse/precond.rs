use std::fmt;
use std::str::FromStr;

use super::SparseSymMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PreconditionerKind {
    #[default]
    None,
    Jacobi,
    Ic0,
}

impl fmt::Display for PreconditionerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Jacobi => "jacobi",
            Self::Ic0 => "ic0",
        })
    }
}

impl FromStr for PreconditionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "jacobi" => Ok(Self::Jacobi),
            "ic0" => Ok(Self::Ic0),
            other => Err(Error::InvalidArgument(format!("unknown preconditioner `{other}`"))),
        }
    }
}

/// Sparse lower-triangular factor `L` in CSR form; the diagonal entry is the
/// last one of every row.
#[derive(Debug, Clone)]
pub struct LowerFactor {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl LowerFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// Dense row-major copy of `L`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                dense[i * self.n + j] = v;
            }
        }
        dense
    }

    /// Solves `L y = b` in place.
    fn forward_solve(&self, y: &mut [f64]) {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let last = cols.len() - 1;
            let mut acc = y[i];
            for (&j, &v) in cols[..last].iter().zip(&vals[..last]) {
                acc -= v * y[j];
            }
            y[i] = acc / vals[last];
        }
    }

    /// Solves `L^T y = b` in place, sweeping rows of `L` bottom up.
    fn backward_solve(&self, y: &mut [f64]) {
        for i in (0..self.n).rev() {
            let (cols, vals) = self.row(i);
            let last = cols.len() - 1;
            y[i] /= vals[last];
            let yi = y[i];
            for (&j, &v) in cols[..last].iter().zip(&vals[..last]) {
                y[j] -= v * yi;
            }
        }
    }

    /// `L^T x`.
    fn transpose_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * x[i];
            }
        }
        y
    }
}

#[derive(Debug, Clone)]
enum Factor {
    Identity,
    Jacobi { inv_diag: Vec<f64> },
    Ic0(LowerFactor),
}

/// A symmetric positive definite preconditioner `M`, applied through `M^{-1}`.
#[derive(Debug, Clone)]
pub struct Preconditioner {
    n: usize,
    factor: Factor,
}

impl Preconditioner {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            factor: Factor::Identity,
        }
    }

    pub fn jacobi(a: &SparseSymMatrix) -> Self {
        Self {
            n: a.n(),
            factor: Factor::Jacobi {
                inv_diag: a.diagonal().iter().map(|d| 1.0 / d).collect(),
            },
        }
    }

    /// Zero-fill incomplete Cholesky on the pattern of the lower triangle of
    /// `A`. A nonpositive pivot is reported with its (0-based) row; no shift
    /// is attempted.
    pub fn ic0(a: &SparseSymMatrix) -> Result<Self> {
        let n = a.n();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j > i {
                    break;
                }
                col_indices.push(j);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }

        // Row-oriented (up-looking) factorization: row i only reads finished rows k < i.
        for i in 0..n {
            let start = row_offsets[i];
            let end = row_offsets[i + 1];
            for p in start..end - 1 {
                let k = col_indices[p];
                let (kstart, kend) = (row_offsets[k], row_offsets[k + 1]);
                // sparse dot of row i (cols < k) with row k (cols < k), both sorted
                let mut acc = values[p];
                let (mut a_ptr, mut b_ptr) = (start, kstart);
                while a_ptr < p && b_ptr < kend - 1 {
                    let (ca, cb) = (col_indices[a_ptr], col_indices[b_ptr]);
                    if ca == cb {
                        acc -= values[a_ptr] * values[b_ptr];
                        a_ptr += 1;
                        b_ptr += 1;
                    } else if ca < cb {
                        a_ptr += 1;
                    } else {
                        b_ptr += 1;
                    }
                }
                values[p] = acc / values[kend - 1];
            }
            let mut pivot = values[end - 1];
            for p in start..end - 1 {
                pivot -= values[p] * values[p];
            }
            if !(pivot > 0.0) {
                return Err(Error::PivotFailure { row: i, pivot });
            }
            values[end - 1] = pivot.sqrt();
        }

        Ok(Self {
            n,
            factor: Factor::Ic0(LowerFactor {
                n,
                row_offsets,
                col_indices,
                values,
            }),
        })
    }

    pub fn build(a: &SparseSymMatrix, kind: PreconditionerKind) -> Result<Self> {
        match kind {
            PreconditionerKind::None => Ok(Self::identity(a.n())),
            PreconditionerKind::Jacobi => Ok(Self::jacobi(a)),
            PreconditionerKind::Ic0 => Self::ic0(a),
        }
    }

    pub fn kind(&self) -> PreconditionerKind {
        match self.factor {
            Factor::Identity => PreconditionerKind::None,
            Factor::Jacobi { .. } => PreconditionerKind::Jacobi,
            Factor::Ic0(_) => PreconditionerKind::Ic0,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.factor, Factor::Identity)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ic0_factor(&self) -> Option<&LowerFactor> {
        match &self.factor {
            Factor::Ic0(l) => Some(l),
            _ => None,
        }
    }

    /// `z = M^{-1} r`.
    pub fn apply_inverse_into(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        for len in [r.len(), z.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        match &self.factor {
            Factor::Identity => z.copy_from_slice(r),
            Factor::Jacobi { inv_diag } => {
                for ((zi, ri), di) in z.iter_mut().zip(r).zip(inv_diag) {
                    *zi = ri * di;
                }
            }
            Factor::Ic0(l) => {
                z.copy_from_slice(r);
                l.forward_solve(z);
                l.backward_solve(z);
            }
        }
        Ok(())
    }

    pub fn apply_inverse(&self, r: &[f64]) -> Result<Vec<f64>> {
        let mut z = vec![0.0; self.n];
        self.apply_inverse_into(r, &mut z)?;
        Ok(z)
    }

    /// `x^T M x`, the squared M-norm.
    pub fn m_norm2(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(match &self.factor {
            Factor::Identity => x.iter().map(|v| v * v).sum(),
            Factor::Jacobi { inv_diag } => x.iter().zip(inv_diag).map(|(v, d)| v * v / d).sum(),
            Factor::Ic0(l) => l.transpose_mul(x).iter().map(|v| v * v).sum(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_diagonal() {
        let a = SparseSymMatrix::from_dense(2, &[4.0, 0.0, 0.0, 9.0]).unwrap();
        let m = Preconditioner::build(&a, PreconditionerKind::Jacobi).unwrap();
        assert_eq!(m.apply_inverse(&[1.0, 1.0]).unwrap(), vec![0.25, 1.0 / 9.0]);
    }

    #[test]
    fn identity_is_identity() {
        let m = Preconditioner::identity(3);
        assert_eq!(m.apply_inverse(&[1.0, -2.0, 3.0]).unwrap(), vec![1.0, -2.0, 3.0]);
        assert_eq!(m.m_norm2(&[1.0, 2.0, 2.0]).unwrap(), 9.0);
    }

    #[test]
    fn ic0_pivot_failure() {
        // second pivot is 1 - 2^2 < 0
        let a = SparseSymMatrix::from_dense(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        match Preconditioner::ic0(&a) {
            Err(Error::PivotFailure { row, pivot }) => {
                assert_eq!(row, 1);
                assert_eq!(pivot, -3.0);
            }
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }

    #[test]
    fn ic0_kind_roundtrip() {
        for kind in [PreconditionerKind::None, PreconditionerKind::Jacobi, PreconditionerKind::Ic0] {
            assert_eq!(kind.to_string().parse::<PreconditionerKind>().unwrap(), kind);
        }
        assert!("ilu".parse::<PreconditionerKind>().is_err());
    }
}
