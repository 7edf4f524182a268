use crate::error::{Error, Result};
use crate::sparse::{dot, Preconditioner, SparseSymMatrix};

/// Scalars produced by one CG (or PCG) iteration.
///
/// For iteration `k` this carries the step length of the previous direction
/// and the coefficients that advanced the state to `x_k`, `r_k`, `p_k`. Under
/// PCG, `gamma`, `delta`, and `rnorm2` are the preconditioned coefficients
/// and `rnorm2 = z_k^T r_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Iteration index `k >= 1`.
    pub k: usize,
    /// Step length `gamma_{k-1}`.
    pub gamma: f64,
    /// Direction update `delta_k`.
    pub delta: f64,
    /// `||r_k||^2` (CG) or `z_k^T r_k` (PCG).
    pub rnorm2: f64,
    /// Quadrature weight `psi_{k-1} = gamma_{k-1} * rnorm2_{k-1}`, the decrease
    /// of the squared A-norm of the error from `x_{k-1}` to `x_k`.
    pub psi: f64,
    /// Euclidean norm of the recursively updated residual `r_k`.
    pub residual_norm: f64,
}

/// Evolving state of a CG/PCG solve.
///
/// The state only holds vectors of the current iteration; everything the
/// estimators need flows out through [`IterationRecord`].
#[derive(Debug, Clone)]
pub struct CgState {
    k: usize,
    x: Vec<f64>,
    r: Vec<f64>,
    /// Preconditioned residual; `None` for plain CG where `z = r`.
    z: Option<Vec<f64>>,
    p: Vec<f64>,
    ap: Vec<f64>,
    gamma_prev: f64,
    delta: f64,
    rnorm2: f64,
    converged: bool,
    parallel: bool,
}

impl CgState {
    /// Sets up `r_0 = b - A x_0`, `z_0 = M^{-1} r_0`, `p_0 = z_0`.
    ///
    /// `x0 = None` means the zero initial guess.
    pub fn new(
        a: &SparseSymMatrix,
        b: &[f64],
        x0: Option<&[f64]>,
        precond: &Preconditioner,
    ) -> Result<Self> {
        let n = a.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        if precond.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: precond.n(),
            });
        }
        let x = match x0 {
            Some(x0) if x0.len() != n => {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x0.len(),
                })
            }
            Some(x0) => x0.to_vec(),
            None => vec![0.0; n],
        };
        let mut r = b.to_vec();
        if x0.is_some() {
            let ax = a.matvec(&x)?;
            for (ri, axi) in r.iter_mut().zip(&ax) {
                *ri -= axi;
            }
        }
        let z = if precond.is_identity() {
            None
        } else {
            Some(precond.apply_inverse(&r)?)
        };
        let rnorm2 = dot(z.as_deref().unwrap_or(&r), &r);
        if rnorm2 == 0.0 {
            return Err(Error::DegenerateStart);
        }
        if rnorm2 < 0.0 || !rnorm2.is_finite() {
            return Err(Error::PreconditionerNotPositiveDefinite {
                iteration: 0,
                value: rnorm2,
            });
        }
        let p = z.clone().unwrap_or_else(|| r.clone());
        Ok(Self {
            k: 0,
            x,
            r,
            z,
            p,
            ap: vec![0.0; n],
            gamma_prev: f64::NAN,
            delta: 0.0,
            rnorm2,
            converged: false,
            parallel: false,
        })
    }

    /// Use the row-parallel matrix–vector product. Results are unchanged.
    pub fn with_parallel_matvec(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Advances one iteration, following the line order of CG/PCG exactly.
    pub fn step(&mut self, a: &SparseSymMatrix, precond: &Preconditioner) -> Result<IterationRecord> {
        if self.converged {
            return Err(Error::AlreadyConverged { iteration: self.k });
        }
        let iteration = self.k + 1;
        if self.parallel {
            a.par_matvec_into(&self.p, &mut self.ap)?;
        } else {
            a.matvec_into(&self.p, &mut self.ap)?;
        }
        let curvature = dot(&self.p, &self.ap);
        if !(curvature > 0.0) {
            return Err(Error::NotPositiveDefinite {
                iteration,
                curvature,
            });
        }
        let rnorm2_prev = self.rnorm2;
        let gamma = rnorm2_prev / curvature;
        for (xi, pi) in self.x.iter_mut().zip(&self.p) {
            *xi += gamma * pi;
        }
        for (ri, api) in self.r.iter_mut().zip(&self.ap) {
            *ri -= gamma * api;
        }
        if let Some(z) = self.z.as_mut() {
            precond.apply_inverse_into(&self.r, z)?;
        }
        let rnorm2 = dot(self.z.as_deref().unwrap_or(&self.r), &self.r);
        if rnorm2 < 0.0 || !rnorm2.is_finite() {
            return Err(Error::PreconditionerNotPositiveDefinite {
                iteration,
                value: rnorm2,
            });
        }
        let delta = rnorm2 / rnorm2_prev;
        let direction_source = self.z.as_deref().unwrap_or(&self.r);
        for (pi, si) in self.p.iter_mut().zip(direction_source) {
            *pi = si + delta * *pi;
        }

        self.k = iteration;
        self.gamma_prev = gamma;
        self.delta = delta;
        self.rnorm2 = rnorm2;
        self.converged = rnorm2 == 0.0;

        let residual_norm = if self.z.is_some() {
            dot(&self.r, &self.r).sqrt()
        } else {
            rnorm2.sqrt()
        };
        Ok(IterationRecord {
            k: iteration,
            gamma,
            delta,
            rnorm2,
            psi: gamma * rnorm2_prev,
            residual_norm,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Preconditioned residual (`r` itself for plain CG).
    pub fn z(&self) -> &[f64] {
        self.z.as_deref().unwrap_or(&self.r)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// `gamma_{k-1}`; NaN before the first step.
    pub fn gamma_prev(&self) -> f64 {
        self.gamma_prev
    }

    /// `delta_k`; zero before the first step.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `||r_k||^2` or `z_k^T r_k`.
    pub fn rnorm2(&self) -> f64 {
        self.rnorm2
    }

    /// Euclidean norm of the current recursive residual.
    pub fn residual_norm(&self) -> f64 {
        dot(&self.r, &self.r).sqrt()
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn into_solution(self) -> Vec<f64> {
        self.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> SparseSymMatrix {
        let t: Vec<_> = values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        SparseSymMatrix::from_triplets(values.len(), &t).unwrap()
    }

    #[test]
    fn identity_converges_in_one_step() {
        let a = diag(&[1.0, 1.0, 1.0]);
        let m = Preconditioner::identity(3);
        let mut s = CgState::new(&a, &[1.0; 3], None, &m).unwrap();
        let rec = s.step(&a, &m).unwrap();
        assert_eq!(rec.gamma, 1.0);
        assert_eq!(rec.rnorm2, 0.0);
        assert!(s.converged());
        assert_eq!(s.x(), &[1.0; 3]);
        assert!(matches!(s.step(&a, &m), Err(Error::AlreadyConverged { iteration: 1 })));
    }

    #[test]
    fn two_by_two_hand_evaluation() {
        let a = diag(&[1.0, 2.0]);
        let m = Preconditioner::identity(2);
        let mut s = CgState::new(&a, &[1.0, 1.0], None, &m).unwrap();
        let rec = s.step(&a, &m).unwrap();
        assert!((rec.gamma - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.r()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.r()[1] + 1.0 / 3.0).abs() < 1e-15);
        assert!((rec.delta - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(rec.psi, rec.gamma * 2.0);
    }

    #[test]
    fn zero_rhs_is_degenerate() {
        let a = diag(&[1.0, 2.0]);
        let m = Preconditioner::identity(2);
        assert!(matches!(
            CgState::new(&a, &[0.0, 0.0], None, &m),
            Err(Error::DegenerateStart)
        ));
    }

    #[test]
    fn indefinite_matrix_breaks_down() {
        // [[1, 2], [2, 1]] has eigenvalues 3 and -1.
        let a = SparseSymMatrix::from_dense(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        let m = Preconditioner::identity(2);
        let mut s = CgState::new(&a, &[1.0, -1.0], None, &m).unwrap();
        match s.step(&a, &m) {
            Err(Error::NotPositiveDefinite {
                iteration,
                curvature,
            }) => {
                assert_eq!(iteration, 1);
                assert!(curvature < 0.0);
            }
            other => panic!("expected breakdown, got {other:?}"),
        }
    }

    #[test]
    fn local_orthogonality() {
        let a = crate::generators::tridiagonal(30, 4.0, -1.0);
        let m = Preconditioner::identity(30);
        let b: Vec<f64> = (0..30).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
        let mut s = CgState::new(&a, &b, None, &m).unwrap();
        for _ in 0..10 {
            let p_prev = s.p().to_vec();
            s.step(&a, &m).unwrap();
            let rp = dot(s.r(), &p_prev).abs();
            let scale = crate::sparse::norm2(s.r()) * crate::sparse::norm2(&p_prev);
            assert!(rp <= 1e-12 * scale, "r'p = {rp:e}, scale {scale:e}");
        }
    }
}
