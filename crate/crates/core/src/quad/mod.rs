//! Quadrature-based bounds on the A-norm of the CG error.
//!
//! Every value here is a *squared* A-norm; square roots are taken only by
//! whoever reports them.

mod ledger;
mod phi;
mod radau;

pub use ledger::{approx_upper, BoundLedger, RadauBound};
pub use phi::{update_phi, PhiState};
pub use radau::GaussRadauState;
