//! Cheap estimates of `||x_k||` from the CG coefficients and the normwise
//! backward errors built on them.

mod backward;
mod xi;

pub use backward::{backward_error, precond_backward_error};
pub use xi::{X0Correction, XiState};
