//! Matrix and vector substrate: symmetric CSR storage, Matrix Market I/O,
//! and the Jacobi / IC(0) preconditioners.

mod csr;
mod mm;
mod precond;

pub use csr::SparseSymMatrix;
pub use mm::{parse_matrix_market, parse_matrix_market_str, read_matrix_market, write_matrix_market};
pub use precond::{LowerFactor, Preconditioner, PreconditionerKind};

/// Left-to-right dot product. Every inner product in the crate goes through
/// here so that reruns are bitwise reproducible.
#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}

#[inline]
pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
