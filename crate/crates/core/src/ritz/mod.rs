//! Incremental estimates of the extreme Ritz values of `T_k = L_k L_k^T`.
//!
//! The largest Ritz value is `||L_k^T||^2` and the smallest is
//! `||L_k^{-T}||^{-2}`; both norms are estimated one appended column at a
//! time from a 2x2 eigenproblem. The optional refinement stores the
//! bidiagonal and takes one shifted inverse iteration per request.

mod dstqds;
mod eig2;
mod incnorm;
mod refine;
mod tracker;

pub use dstqds::{ldlt_solve, shifted_ldlt};
pub use eig2::{two_by_two_eigmax, TwoByTwoEig};
pub use incnorm::{IncNormMode, IncNormState};
pub use refine::{BidiagonalFactor, RefineCadence, Refined};
pub use tracker::{RitzEstimate, RitzTracker};
