//! Test-system generators: the variable-coefficient diffusion problem and
//! random SPD matrices with a prescribed spectrum.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::sparse::SparseSymMatrix;

fn diffusion_coefficient(x: f64, y: f64) -> f64 {
    1.0 / ((2.0 + 1.8 * (10.0 * x).sin()) * (2.0 + 1.8 * (10.0 * y).sin()))
}

/// Five-point finite-difference discretization of
/// `-div(lambda grad u)` on the unit square with zero Dirichlet data and
/// `lambda(x, y) = 1 / ((2 + 1.8 sin 10x)(2 + 1.8 sin 10y))`, on an
/// `m x m` interior grid. Coefficients are sampled at cell-face midpoints;
/// the matrix is left unscaled by `h^2`.
pub fn diffusion_2d(m: usize) -> SparseSymMatrix {
    let h = 1.0 / (m as f64 + 1.0);
    let idx = |i: usize, j: usize| j * m + i;
    let mut triplets = Vec::with_capacity(5 * m * m);
    for j in 0..m {
        for i in 0..m {
            // half-integer grid coordinates, computed so that neighbouring
            // cells see bitwise identical face coefficients
            let at = |twice: usize| twice as f64 * 0.5 * h;
            let (x, y) = (at(2 * i + 2), at(2 * j + 2));
            let east = diffusion_coefficient(at(2 * i + 3), y);
            let west = diffusion_coefficient(at(2 * i + 1), y);
            let north = diffusion_coefficient(x, at(2 * j + 3));
            let south = diffusion_coefficient(x, at(2 * j + 1));
            let row = idx(i, j);
            if j > 0 {
                triplets.push((row, idx(i, j - 1), -south));
            }
            if i > 0 {
                triplets.push((row, idx(i - 1, j), -west));
            }
            triplets.push((row, row, east + west + north + south));
            if i + 1 < m {
                triplets.push((row, idx(i + 1, j), -east));
            }
            if j + 1 < m {
                triplets.push((row, idx(i, j + 1), -north));
            }
        }
    }
    SparseSymMatrix::from_triplets(m * m, &triplets).expect("diffusion matrix is valid")
}

/// Symmetric tridiagonal matrix with constant diagonal and off-diagonal.
pub fn tridiagonal(n: usize, diag: f64, off: f64) -> SparseSymMatrix {
    let mut triplets = Vec::with_capacity(3 * n);
    for i in 0..n {
        if i > 0 {
            triplets.push((i, i - 1, off));
        }
        triplets.push((i, i, diag));
        if i + 1 < n {
            triplets.push((i, i + 1, off));
        }
    }
    SparseSymMatrix::from_triplets(n, &triplets).expect("tridiagonal matrix is valid")
}

/// Random dense SPD matrix `Q diag(eigs) Q^T` with `Q` from the QR
/// factorization of a Gaussian matrix. Returned in exact-symmetric CSR form
/// together with the prescribed eigenvalues.
pub fn random_spd_with_spectrum<R: Rng + ?Sized>(eigs: &[f64], rng: &mut R) -> SparseSymMatrix {
    let n = eigs.len();
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let q = g.qr().q();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(eigs));
    let a = &q * d * q.transpose();
    let mut dense = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            dense[i * n + j] = v;
            dense[j * n + i] = v;
        }
    }
    SparseSymMatrix::from_dense(n, &dense).expect("random SPD matrix is valid")
}

/// Random SPD matrix of order `n` whose eigenvalues are spread
/// geometrically over `[1, kappa]`.
pub fn random_spd<R: Rng + ?Sized>(n: usize, kappa: f64, rng: &mut R) -> (SparseSymMatrix, Vec<f64>) {
    let eigs: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        (0..n)
            .map(|i| kappa.powf(i as f64 / (n - 1) as f64))
            .collect()
    };
    (random_spd_with_spectrum(&eigs, rng), eigs)
}

/// Gaussian vector scaled to unit Euclidean norm.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = crate::sparse::norm2(&v);
    v.into_iter().map(|x| x / norm).collect()
}

/// Reproducible generator for a seed; the same stream on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-norm Gaussian right-hand side determined by `seed`.
pub fn random_rhs(n: usize, seed: u64) -> Vec<f64> {
    random_unit_vector(n, &mut seeded_rng(seed))
}
