//! CG and PCG iterations and the map from CG to Lanczos coefficients.

mod engine;
mod lanczos;
mod stop;

pub use engine::{CgState, IterationRecord};
pub use lanczos::{cholesky_bidiagonal, jacobi_matrix, lanczos_coeffs, LanczosCoeffs, LanczosMap};
pub use stop::{BackwardError, ErrorBound, NeverStop, RelativeResidual, StopContext, StopRule};
