use crate::error::{Error, Result};

/// Normwise backward error `||r|| / (||A|| ||x|| + ||b||)`.
pub fn backward_error(rnorm: f64, anorm: f64, xnorm: f64, bnorm: f64) -> Result<f64> {
    if [rnorm, anorm, xnorm, bnorm].iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidArgument("backward error inputs must be nonnegative".into()));
    }
    let denom = anorm * xnorm + bnorm;
    if denom == 0.0 {
        return Err(Error::InvalidArgument("backward error denominator is zero".into()));
    }
    Ok(rnorm / denom)
}

/// Backward error of the preconditioned system `L^{-1} A L^{-T}`:
/// `sqrt(z'r) / (||A_hat|| sqrt(xi) + sqrt(b' M^{-1} b))`.
///
/// `anorm_hat` estimates `||A_hat||_2 = lambda_max(A_hat)`; the forward Ritz
/// estimate `rho_max` is that eigenvalue itself, so it is passed unchanged.
pub fn precond_backward_error(ztr: f64, anorm_hat: f64, xi: f64, b_minv_norm2: f64) -> Result<f64> {
    if ztr < 0.0 {
        return Err(Error::PreconditionerNotPositiveDefinite {
            iteration: 0,
            value: ztr,
        });
    }
    if !(xi >= 0.0 && b_minv_norm2 >= 0.0) {
        return Err(Error::InvalidArgument("backward error inputs must be nonnegative".into()));
    }
    backward_error(ztr.sqrt(), anorm_hat, xi.sqrt(), b_minv_norm2.sqrt())
}
