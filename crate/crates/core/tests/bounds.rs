mod common;

use cgbounds::cg::{CgState, NeverStop};
use cgbounds::generators::{diffusion_2d, random_rhs, random_spd, seeded_rng};
use cgbounds::monitor::MonitorConfig;
use cgbounds::oracle::{eigen_equal_rhs, extreme_eigenvalues};
use cgbounds::quad::{update_phi, PhiState};
use cgbounds::solnorm::XiState;
use cgbounds::session::{solve, SolveOptions};
use cgbounds::sparse::{dot, Preconditioner, SparseSymMatrix};
use common::*;
use proptest::prelude::*;

fn config(mu: Option<f64>, delay: usize) -> MonitorConfig {
    MonitorConfig {
        mu,
        delay,
        refine: None,
    }
}

fn diag(values: &[f64]) -> SparseSymMatrix {
    let t: Vec<_> = values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
    SparseSymMatrix::from_triplets(values.len(), &t).unwrap()
}

fn relative_error(trace: &Trace, k: usize) -> f64 {
    (trace.true_err2[k] / trace.true_err2[0]).sqrt()
}

#[test]
fn quadrature_telescope() {
    let (a, _) = random_spd(10, 100.0, &mut seeded_rng(21));
    let b = random_rhs(10, 22);
    let trace = traced_run(&a, &b, &Preconditioner::identity(10), config(None, 0), 40);
    let psi: Vec<f64> = trace.records().iter().map(|r| r.psi).collect();
    // rounding in the telescope is about eps ||x||_A^2 / ||x - x_k||_A^2 relative,
    // so the 1e-10 check stops where the relative error reaches 1e-4
    let last = (0..psi.len()).take_while(|&k| relative_error(&trace, k) >= 1e-4).last().unwrap();
    for k in 0..=last {
        for m in k + 1..=last + 1 {
            let sum: f64 = psi[k..m].iter().sum();
            let diff = trace.true_err2[k] - trace.true_err2[m];
            assert!((diff - sum).abs() <= 1e-10 * trace.true_err2[k], "k {k}, m {m}");
        }
    }
    // a late iterate against the tail of the run
    let k = last;
    let tail: f64 = psi[k..].iter().sum();
    assert!(rel(tail.sqrt(), trace.true_err2[k].sqrt()) <= 1e-8);
}

#[test]
fn phi_equals_direct_sum_over_thirty_steps() {
    let (a, _) = random_spd(60, 1e3, &mut seeded_rng(4));
    let b = random_rhs(60, 5);
    let m = Preconditioner::identity(60);
    let mut state = CgState::new(&a, &b, None, &m).unwrap();
    let mut norms = vec![state.rnorm2()];
    let mut phi = PhiState::new();
    for _ in 0..30 {
        let rec = state.step(&a, &m).unwrap();
        norms.push(rec.rnorm2);
        phi.update(rec.delta).unwrap();
        let direct = 1.0 / (rec.rnorm2 * norms.iter().map(|r| 1.0 / r).sum::<f64>());
        assert!(rel(phi.phi(), direct) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn phi_stays_in_unit_interval(deltas in proptest::collection::vec(1e-3f64..1e3, 1..60)) {
        let mut phi = 1.0;
        for d in deltas {
            phi = update_phi(phi, d).unwrap();
            prop_assert!(phi > 0.0 && phi <= 1.0);
        }
    }

    #[test]
    fn bound_chain_on_random_systems(n in 5usize..30, kappa in 2.0f64..1e3, seed in any::<u64>()) {
        let (a, eigs) = random_spd(n, kappa, &mut seeded_rng(seed));
        let b = random_rhs(n, seed ^ 1);
        // a node safely below the spectrum
        let mu = eigs[0] * (1.0 - 1e-6);
        let trace = traced_run(&a, &b, &Preconditioner::identity(n), config(Some(mu), 2), 2 * n);
        for row in trace.report.rows() {
            if relative_error(&trace, row.k) < 1e-4 {
                break;
            }
            let t = trace.true_err2[row.k];
            if let Some(lo) = row.gauss_lower {
                prop_assert!(lo <= t * (1.0 + 1e-10), "k {} lo {lo:e} t {t:e} rel {:e}", row.k, relative_error(&trace, row.k));
            }
            if let (Some(gr), Some(nu)) = (row.gauss_radau_upper, row.new_upper) {
                prop_assert!(gr >= t * (1.0 - 1e-10));
                prop_assert!(gr <= nu * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn radau_equality_at_last_step() {
    let a = diag(&[1.0, 2.0, 3.0]);
    let b = [1.0, 1.0, 1.0];
    let trace = traced_run(&a, &b, &Preconditioner::identity(3), config(Some(1.0), 0), 2);
    let row = &trace.report.rows()[2];
    assert!(rel(row.gauss_radau_upper.unwrap(), trace.true_err2[2]) <= 1e-10);
    let radau = trace.report.monitor.radau().unwrap();
    assert!(radau.sign_ok());
}

#[test]
fn node_above_spectrum_loses_sign() {
    let values: Vec<f64> = (1..=10).map(|i| i as f64).collect();
    let a = diag(&values);
    let b = [1.0; 10];
    let trace = traced_run(&a, &b, &Preconditioner::identity(10), config(Some(1.5), 0), 9);
    let lost = trace.report.monitor.radau_sign_lost_at().expect("sign loss");
    let rows = trace.report.rows();
    assert!(rows[lost..].iter().all(|r| r.gauss_radau_tainted && r.gauss_radau_upper.is_some_and(|v| v >= 0.0)));
    assert!(rows[..lost].iter().all(|r| !r.gauss_radau_tainted));
}

#[test]
fn delay_one_exceeds_delay_zero_lower_bound() {
    let (a, eigs) = random_spd(20, 500.0, &mut seeded_rng(8));
    let b = random_rhs(20, 9);
    let m = Preconditioner::identity(20);
    let t0 = traced_run(&a, &b, &m, config(Some(eigs[0] * 0.99), 0), 15);
    let t1 = traced_run(&a, &b, &m, config(Some(eigs[0] * 0.99), 1), 15);
    for (r0, r1) in t0.report.rows().iter().zip(t1.report.rows()) {
        if let (Some(x), Some(y)) = (r0.gauss_lower, r1.gauss_lower) {
            assert!(y > x);
        }
    }
}

#[test]
fn delayed_lower_bound_on_random_system() {
    let (a, _) = random_spd(20, 1e3, &mut seeded_rng(31));
    let b = random_rhs(20, 32);
    let trace = traced_run(&a, &b, &Preconditioner::identity(20), config(None, 4), 40);
    for row in trace.report.rows() {
        if relative_error(&trace, row.k) < 1e-4 {
            break;
        }
        if let Some(lo) = row.gauss_lower {
            assert!(lo <= trace.true_err2[row.k] * (1.0 + 1e-10), "k {}", row.k);
        }
    }
}

#[test]
fn oracle_node_chain_before_saturation() {
    let (a, _) = random_spd(20, 1e3, &mut seeded_rng(41));
    let b = random_rhs(20, 42);
    let (lmin, _) = extreme_eigenvalues(&a).unwrap();
    let trace = traced_run(&a, &b, &Preconditioner::identity(20), config(Some(lmin), 2), 60);
    // with mu exactly at lambda_min the upper bound is tight to a few 1e-9
    // near relative error 5e-5 and rounding can push it under
    for row in trace.report.rows() {
        if relative_error(&trace, row.k) < 1e-4 {
            break;
        }
        let t = trace.true_err2[row.k];
        if let Some(gr) = row.gauss_radau_upper {
            assert!(gr >= t * (1.0 - 1e-10), "k {} gr {gr:e} t {t:e} rel {:e}", row.k, relative_error(&trace, row.k));
        }
        if let Some(lo) = row.gauss_lower {
            assert!(lo <= t * (1.0 + 1e-10), "k {}", row.k);
        }
    }
}

#[test]
fn bcsstk01_upper_bound_holds_above_saturation_level() {
    let a = bcsstk01();
    let b = eigen_equal_rhs(&a).unwrap();
    let mu = BCSSTK01_LAMBDA_MIN / (1.0 + 1e-8);
    let trace = traced_run(&a, &b, &Preconditioner::identity(48), config(Some(mu), 0), 200);
    let mut checked = 0;
    for row in trace.report.rows() {
        if relative_error(&trace, row.k) <= 1e-7 {
            break;
        }
        checked += 1;
        assert!(row.gauss_radau_upper.unwrap() >= trace.true_err2[row.k], "k {}", row.k);
    }
    assert!(checked > 100);
    // saturation of the true error sets in after roughly 180 iterations
    let sat = trace.saturation();
    assert!((140..=200).contains(&sat), "saturation at {sat}");
}

#[test]
fn new_bound_envelopes_radau_bounds() {
    let a = bcsstk01();
    let b = eigen_equal_rhs(&a).unwrap();
    let m = Preconditioner::identity(48);
    for e in 2..=14 {
        let mu = BCSSTK01_LAMBDA_MIN / (1.0 + 10f64.powi(-e));
        let trace = traced_run(&a, &b, &m, config(Some(mu), 0), 200);
        for row in trace.report.rows() {
            let (gr, nu) = (row.gauss_radau_upper.unwrap(), row.new_upper.unwrap());
            assert!(gr <= nu * (1.0 + 1e-12), "m {e}, k {}", row.k);
        }
    }
}

#[test]
fn zero_delay_new_bound_is_nonincreasing() {
    let (a, eigs) = random_spd(40, 1e3, &mut seeded_rng(51));
    let b = random_rhs(40, 52);
    let trace = traced_run(&a, &b, &Preconditioner::identity(40), config(Some(eigs[0]), 0), 80);
    let values: Vec<f64> = trace.report.rows().iter().map(|r| r.new_upper.unwrap()).collect();
    assert!((values[0] - trace.report.rows()[0].rnorm2 / eigs[0]).abs() <= 1e-15 * values[0]);
    for w in values.windows(2) {
        assert!(w[1] <= w[0]);
    }
}

#[test]
fn approximate_bound_tracks_radau_late() {
    for seed in 0..10 {
        let (a, _) = random_spd(20, 1e3, &mut seeded_rng(100 + seed));
        let b = random_rhs(20, 200 + seed);
        let (lmin, _) = extreme_eigenvalues(&a).unwrap();
        let trace = traced_run(&a, &b, &Preconditioner::identity(20), config(Some(lmin), 0), 25);
        let row = &trace.report.rows()[18];
        let ratio = (row.approx_upper.unwrap() / row.gauss_radau_upper.unwrap()).sqrt();
        assert!((0.1..=10.0).contains(&ratio), "seed {seed}: ratio {ratio}");
    }
}

#[test]
fn approximate_bound_underestimates_early_with_preconditioning() {
    let a = diffusion_2d(20);
    let b = random_rhs(a.n(), 3);
    let m = Preconditioner::ic0(&a).unwrap();
    let trace = traced_run(&a, &b, &m, config(None, 0), 30);
    let early = trace.report.rows()[1..6]
        .iter()
        .any(|r| r.approx_upper.is_some_and(|u| u < trace.true_err2[r.k]));
    assert!(early);
}

#[test]
fn nonzero_start_cross_term_is_exact() {
    let (a, _) = random_spd(20, 1e3, &mut seeded_rng(61));
    let b = random_rhs(20, 62);
    let x0 = random_rhs(20, 63);
    let m = Preconditioner::identity(20);
    let x0_norm2 = dot(&x0, &x0);
    let mut direct = Vec::new();
    let mut cross = Vec::new();
    let options = SolveOptions {
        max_iters: 30,
        stop: &NeverStop,
        monitor: config(None, 0),
        x0: Some(&x0),
        parallel_matvec: false,
    };
    let report = solve(&a, &b, &m, &options, |s, _| {
        direct.push(dot(s.x(), s.x()));
        let d: Vec<f64> = s.x().iter().zip(&x0).map(|(u, v)| u - v).collect();
        cross.push(dot(&x0, &d));
    })
    .unwrap();
    let rows = report.rows();
    for row in rows {
        // everything except xi: x0^T (x_k - x0) needs no orthogonality
        let c = 0.5 * (row.xnorm2 - x0_norm2 - report_xi(&report, row.k));
        assert!((c - cross[row.k]).abs() <= 1e-12 * x0_norm2, "k {}", row.k);
    }
    // the full estimate while the Krylov basis is still orthogonal
    for row in &rows[..=10] {
        assert!(rel(row.xnorm2, direct[row.k]) <= 1e-8, "k {}", row.k);
    }
}

/// `xi_k` recovered from a zero-start run on the same coefficients.
fn report_xi(report: &cgbounds::session::SolveReport, k: usize) -> f64 {
    let mut xi = XiState::new();
    let mut phi = PhiState::new();
    let mut value = 0.0;
    for r in &report.records[..k] {
        value = xi.update(r.gamma, r.psi, phi.phi());
        if r.rnorm2 > 0.0 {
            phi.update(r.delta).unwrap();
        }
    }
    value
}

#[test]
fn exact_start_is_degenerate() {
    let a = diag(&[1.0, 2.0]);
    let b = [1.0, 2.0];
    let m = Preconditioner::identity(2);
    assert!(CgState::new(&a, &b, Some(&[1.0, 1.0]), &m).is_err());
}
