use super::{ldlt_solve, shifted_ldlt, IncNormState};
use crate::error::{Error, Result};
use crate::sparse::{dot, norm2};

/// When the monitor asks for refined Ritz values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineCadence {
    #[default]
    EveryStep,
    /// Every `m`-th iteration.
    Every(usize),
    /// Only when the run finishes.
    FinalOnly,
}

impl RefineCadence {
    /// Whether iteration `k` is a scheduled refinement point (the final
    /// iteration is handled by the caller).
    pub fn due(&self, k: usize) -> bool {
        match *self {
            Self::EveryStep => true,
            Self::Every(m) => m > 0 && k.is_multiple_of(m),
            Self::FinalOnly => false,
        }
    }
}

/// Result of one shifted inverse iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    /// Refined eigenvalue estimate of `B^T B` (largest or smallest).
    pub value: f64,
    /// Unit iterate `z_hat`.
    pub vector: Vec<f64>,
}

/// Stored upper bidiagonal `B_k = L_k^T` with the explicit approximate
/// singular vectors of both incremental estimators.
///
/// `z` is the forward iterate for `||B_k||`, `z_inv` the one for
/// `||B_k^{-1}||`, and `g = B_k^{-1} B_k^{-T} e_k` the carrier the inverse
/// estimator needs to form its off-diagonal from `z_inv`.
#[derive(Debug, Clone)]
pub struct BidiagonalFactor {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    z: Vec<f64>,
    z_inv: Vec<f64>,
    g: Vec<f64>,
    fwd: IncNormState,
    inv: IncNormState,
}

impl BidiagonalFactor {
    pub fn new(alpha1: f64) -> Result<Self> {
        let inv = IncNormState::inverse(alpha1)?;
        Ok(Self {
            alphas: vec![alpha1],
            betas: Vec::new(),
            z: vec![1.0],
            z_inv: vec![1.0],
            g: vec![inv.tau()],
            fwd: IncNormState::forward(alpha1),
            inv,
        })
    }

    /// Starts from `gamma_0` of a CG run.
    pub fn from_gamma(gamma0: f64) -> Result<Self> {
        Self::new(1.0 / gamma0.sqrt())
    }

    /// Appends `beta_k` and `alpha_{k+1}`.
    pub fn push(&mut self, beta: f64, alpha_next: f64) -> Result<()> {
        if alpha_next == 0.0 {
            return Err(Error::SingularBidiagonal { index: self.k() + 1 });
        }
        let alpha = *self.alphas.last().expect("nonempty");

        let sigma = alpha * beta * self.z.last().expect("nonempty");
        let eig = self.fwd.absorb(sigma, beta * beta + alpha_next * alpha_next);
        extend(&mut self.z, eig.s, eig.c);

        let ratio = beta / alpha_next;
        let w_norm2 = *self.g.last().expect("nonempty");
        let sigma = -ratio * dot(&self.z_inv, &self.g);
        let tau = (beta * beta * w_norm2 + 1.0) / (alpha_next * alpha_next);
        let eig = self.inv.absorb(sigma, tau);
        extend(&mut self.z_inv, eig.s, eig.c);
        for gi in self.g.iter_mut() {
            *gi *= -ratio;
        }
        self.g.push(tau);

        self.alphas.push(alpha_next);
        self.betas.push(beta);
        Ok(())
    }

    /// Appends the column produced by CG record `k + 1`.
    pub fn push_cg(&mut self, gamma_prev: f64, delta: f64, gamma: f64) -> Result<()> {
        if !(delta >= 0.0) {
            return Err(Error::NegativeDelta {
                iteration: self.k(),
                delta,
            });
        }
        self.push((delta / gamma_prev).sqrt(), 1.0 / gamma.sqrt())
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn z_inv(&self) -> &[f64] {
        &self.z_inv
    }

    /// `||B_k^{-1} e_k||^2`, the squared norm of the last column of the inverse.
    pub fn w_norm2(&self) -> f64 {
        *self.g.last().expect("nonempty")
    }

    /// Unrefined estimate of `lambda_max(B^T B)`.
    pub fn rho_max(&self) -> f64 {
        self.fwd.eigenvalue_estimate()
    }

    /// Unrefined estimate of `lambda_min(B^T B)`.
    pub fn rho_min(&self) -> f64 {
        self.inv.eigenvalue_estimate()
    }

    /// One inverse iteration on `B^T B - rho I` started from `z`; returns
    /// the Rayleigh quotient `||B z_hat||^2`.
    pub fn refine_max(&self, rho: f64) -> Result<Refined> {
        let d: Vec<f64> = self.alphas.iter().map(|a| a * a).collect();
        let l: Vec<f64> = self.betas.iter().zip(&self.alphas).map(|(b, a)| b / a).collect();
        let (lp, dp) = shifted_ldlt(&d, &l, rho)?;
        let z_hat = normalized(ldlt_solve(&lp, &dp, &self.z))?;
        let n = z_hat.len();
        let bz: Vec<f64> = (0..n)
            .map(|i| self.alphas[i] * z_hat[i] + if i + 1 < n { self.betas[i] * z_hat[i + 1] } else { 0.0 })
            .collect();
        Ok(Refined {
            value: dot(&bz, &bz),
            vector: z_hat,
        })
    }

    /// One inverse iteration on `B B^T - rho_min I` started from `z_inv`;
    /// returns `1 / ||B^{-1} z_hat||^2`.
    ///
    /// `B B^T = U diag(alpha^2) U^T` with unit upper bidiagonal `U`; reversing
    /// the index order turns it into the `L D L^T` form the shifted
    /// factorization expects.
    pub fn refine_min(&self, rho_min: f64) -> Result<Refined> {
        let n = self.k();
        let d: Vec<f64> = self.alphas.iter().rev().map(|a| a * a).collect();
        let l: Vec<f64> = (0..n - 1).map(|j| self.betas[n - 2 - j] / self.alphas[n - 1 - j]).collect();
        let (lp, dp) = shifted_ldlt(&d, &l, rho_min)?;
        let rhs: Vec<f64> = self.z_inv.iter().rev().copied().collect();
        let mut y = ldlt_solve(&lp, &dp, &rhs);
        y.reverse();
        let z_hat = normalized(y)?;
        let mut u = vec![0.0; n];
        for i in (0..n).rev() {
            let next = if i + 1 < n { self.betas[i] * u[i + 1] } else { 0.0 };
            u[i] = (z_hat[i] - next) / self.alphas[i];
        }
        Ok(Refined {
            value: 1.0 / dot(&u, &u),
            vector: z_hat,
        })
    }
}

fn extend(v: &mut Vec<f64>, s: f64, c: f64) {
    for vi in v.iter_mut() {
        *vi *= s;
    }
    v.push(c);
}

fn normalized(mut y: Vec<f64>) -> Result<Vec<f64>> {
    let norm = norm2(&y);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Oracle(format!("inverse iteration produced norm {norm:e}")));
    }
    for yi in y.iter_mut() {
        *yi /= norm;
    }
    Ok(y)
}
