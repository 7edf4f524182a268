#![allow(dead_code)]

use std::path::PathBuf;

use cgbounds::cg::{cholesky_bidiagonal, IterationRecord, NeverStop};
use cgbounds::generators::{random_spd_with_spectrum, random_unit_vector, seeded_rng};
use cgbounds::monitor::MonitorConfig;
use cgbounds::oracle::{bidiagonal_extremes_bisection, ReferenceSolution};
use cgbounds::session::{solve, SolveOptions, SolveReport};
use cgbounds::sparse::{read_matrix_market, Preconditioner, SparseSymMatrix};
use rand::Rng;

pub const BCSSTK01_LAMBDA_MIN: f64 = 3.4172675626665e3;
pub const BCSSTK01_KAPPA: f64 = 8.8234e5;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn bcsstk01() -> SparseSymMatrix {
    read_matrix_market(data_path("bcsstk01.mtx")).expect("bcsstk01.mtx is readable")
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// A solve together with oracle quantities measured on every iterate.
pub struct Trace {
    pub report: SolveReport,
    /// `||x - x_k||_A^2`.
    pub true_err2: Vec<f64>,
    /// `||x_k||^2`, or `||x_k||_M^2` under preconditioning.
    pub xnorm2: Vec<f64>,
}

impl Trace {
    pub fn records(&self) -> &[IterationRecord] {
        &self.report.records
    }

    /// Index of the first iterate whose true error is within a factor 10 of
    /// the smallest one reached.
    pub fn saturation(&self) -> usize {
        let min = self.true_err2.iter().cloned().fold(f64::INFINITY, f64::min).sqrt();
        self.true_err2
            .iter()
            .position(|e| e.sqrt() <= 10.0 * min)
            .expect("nonempty trace")
    }
}

pub fn traced_run(
    a: &SparseSymMatrix,
    b: &[f64],
    m: &Preconditioner,
    monitor: MonitorConfig,
    max_iters: usize,
) -> Trace {
    let reference = ReferenceSolution::new(a, b).expect("dense reference solve");
    let mut true_err2 = Vec::new();
    let mut xnorm2 = Vec::new();
    let options = SolveOptions {
        max_iters,
        stop: &NeverStop,
        monitor,
        x0: None,
        parallel_matvec: false,
    };
    let report = solve(a, b, m, &options, |state, _| {
        true_err2.push(reference.error_anorm2(state.x()));
        xnorm2.push(m.m_norm2(state.x()).unwrap());
    })
    .expect("solve starts");
    Trace {
        report,
        true_err2,
        xnorm2,
    }
}

/// `(theta_min, theta_max)` of `T_k` from the first `k` records, via the
/// singular values of its Cholesky bidiagonal.
pub fn ritz_extremes(records: &[IterationRecord], k: usize) -> (f64, f64) {
    let (alphas, betas) = cholesky_bidiagonal(records, k);
    let (smax, smin) = bidiagonal_extremes_bisection(&alphas, &betas).expect("bisection oracle");
    (smin * smin, smax * smax)
}

pub struct RandomSystem {
    pub seed: u64,
    pub a: SparseSymMatrix,
    pub b: Vec<f64>,
    pub kappa: f64,
}

/// Random SPD system: order in `[n_lo, n_hi]`, condition number
/// log-uniform in `[10, kappa_max]`, extreme eigenvalues 1 and `kappa`,
/// interior eigenvalues log-uniform, and a random unit right-hand side.
pub fn random_system(seed: u64, n_lo: usize, n_hi: usize, kappa_max: f64) -> RandomSystem {
    let mut rng = seeded_rng(seed);
    let n = rng.random_range(n_lo..=n_hi);
    let kappa = 10f64.powf(rng.random_range(1.0..=kappa_max.log10()));
    let mut eigs = vec![1.0, kappa];
    eigs.extend((2..n).map(|_| kappa.powf(rng.random::<f64>())));
    let a = random_spd_with_spectrum(&eigs, &mut rng);
    let b = random_unit_vector(n, &mut rng);
    RandomSystem { seed, a, b, kappa }
}
