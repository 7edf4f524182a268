//! Dense brute-force reference computations.
//!
//! Nothing here shares state with the incremental estimators; tests and the
//! CLI verify mode compare the two. Everything is `O(n^3)` and refuses
//! orders above a verify limit.

mod bisect;
mod compensated;
mod dense;
mod lanczos;
mod reference;

pub use bisect::bidiagonal_extremes_bisection;
pub use compensated::{dot2, matvec2, rayleigh_quotient, residual2};
pub use dense::{
    dense_eigen_decomposition, dense_eigs, eigen_equal_rhs, dense_eigs_with_limit, dense_extreme_singular,
    extreme_eigenvalues, preconditioned_operator, tridiagonal_eigs, DenseSym,
};
pub use lanczos::{explicit_lanczos, LanczosRun};
pub use reference::{true_error_anorm, ReferenceSolution};

/// Largest order the dense oracles accept by default.
pub const DEFAULT_VERIFY_LIMIT: usize = 2000;

pub(crate) fn check_limit(n: usize, limit: usize) -> crate::Result<()> {
    if n > limit {
        return Err(crate::Error::VerifyLimit { n, limit });
    }
    Ok(())
}
