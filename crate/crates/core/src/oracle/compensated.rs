//! Twice-working-precision dot products for oracle quantities that double
//! precision cannot resolve.

use crate::sparse::SparseSymMatrix;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Compensated dot product: as accurate as if computed in doubled precision
/// and rounded once.
pub fn dot2(x: &[f64], y: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let p = a * b;
        let pe = a.mul_add(b, -p);
        let (t, te) = two_sum(s, p);
        s = t;
        c += te + pe;
    }
    s + c
}

fn row_dot2(a: &SparseSymMatrix, i: usize, v: &[f64]) -> f64 {
    let (cols, vals) = a.row(i);
    let (mut s, mut c) = (0.0, 0.0);
    for (&j, &aij) in cols.iter().zip(vals) {
        let p = aij * v[j];
        let pe = aij.mul_add(v[j], -p);
        let (t, te) = two_sum(s, p);
        s = t;
        c += te + pe;
    }
    s + c
}

/// `A v` with every row accumulated by [`dot2`].
pub fn matvec2(a: &SparseSymMatrix, v: &[f64]) -> Vec<f64> {
    (0..a.n()).map(|i| row_dot2(a, i, v)).collect()
}

/// `b - A x` with every row accumulated in doubled precision.
pub fn residual2(a: &SparseSymMatrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    (0..a.n())
        .map(|i| {
            let (cols, vals) = a.row(i);
            let (mut s, mut c) = (b[i], 0.0);
            for (&j, &aij) in cols.iter().zip(vals) {
                let p = -aij * x[j];
                let pe = (-aij).mul_add(x[j], -p);
                let (t, te) = two_sum(s, p);
                s = t;
                c += te + pe;
            }
            s + c
        })
        .collect()
}

/// Rayleigh quotient `v^T A v / v^T v`, accurate to a few ulps of its value
/// rather than of `||A||`.
pub fn rayleigh_quotient(a: &SparseSymMatrix, v: &[f64]) -> f64 {
    let av = matvec2(a, v);
    dot2(v, &av) / dot2(v, v)
}
