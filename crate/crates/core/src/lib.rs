//! Conjugate gradients with online diagnostics.
//!
//! The solver emits one scalar [`cg::IterationRecord`] per iteration. From
//! that stream alone the [`monitor::Monitor`] maintains lower and upper
//! bounds on the A-norm of the error, extreme Ritz value estimates, an
//! estimate of `||x_k||`, and a normwise backward error. The [`oracle`]
//! module holds dense reference computations for checking all of it.

// `!(x > 0.0)` guards are deliberate: they must also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops mirror the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod cg;
pub mod error;
pub mod generators;
pub mod monitor;
pub mod oracle;
pub mod par;
pub mod quad;
pub mod ritz;
pub mod session;
pub mod solnorm;
pub mod sparse;

pub use error::{Error, Result};
