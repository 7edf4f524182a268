#![allow(clippy::needless_range_loop)]

mod common;

use cgbounds::cg::{CgState, NeverStop};
use cgbounds::generators::{diffusion_2d, random_rhs, random_spd, seeded_rng};
use cgbounds::monitor::MonitorConfig;
use cgbounds::oracle::{extreme_eigenvalues, residual2};
use cgbounds::quad::update_phi;
use cgbounds::session::{solve, SolveOptions};
use cgbounds::solnorm::{backward_error, XiState};
use cgbounds::sparse::{norm2, Preconditioner};
use common::*;
use proptest::prelude::*;

fn config() -> MonitorConfig {
    MonitorConfig {
        mu: None,
        delay: 0,
        refine: None,
    }
}

#[test]
fn xi_matches_closed_form_double_sum() {
    let (a, _) = random_spd(60, 1e3, &mut seeded_rng(14));
    let b = random_rhs(60, 15);
    let m = Preconditioner::identity(60);
    let mut state = CgState::new(&a, &b, None, &m).unwrap();
    let records: Vec<_> = (0..30).map(|_| state.step(&a, &m).unwrap()).collect();
    // phi_j = ||r_j||^2 / ||p_j||^2, and p_i^T p_j = ||r_j||^2 / phi_i for i <= j
    let mut phi = vec![1.0];
    for r in &records {
        phi.push(update_phi(*phi.last().unwrap(), r.delta).unwrap());
    }
    let gamma: Vec<f64> = records.iter().map(|r| r.gamma).collect();
    let psi: Vec<f64> = records.iter().map(|r| r.psi).collect();
    let mut xi = XiState::new();
    for k in 1..=30 {
        let recurrence = xi.update(gamma[k - 1], psi[k - 1], phi[k - 1]);
        let mut direct = 0.0;
        for i in 0..k {
            direct += gamma[i] * psi[i] / phi[i];
            for j in i + 1..k {
                direct += 2.0 * gamma[i] * psi[j] / phi[i];
            }
        }
        assert!(rel(recurrence, direct) <= 1e-13, "k {k}");
    }
}

#[test]
fn xi_tracks_norm_on_well_conditioned_system() {
    let (a, _) = random_spd(50, 10.0, &mut seeded_rng(16));
    let b = random_rhs(50, 17);
    let trace = traced_run(&a, &b, &Preconditioner::identity(50), config(), 50);
    let sat = trace.saturation();
    for row in &trace.report.rows()[1..=sat] {
        let direct = trace.xnorm2[row.k].sqrt();
        assert!(rel(row.xnorm2.sqrt(), direct) <= 1e-12, "k {}", row.k);
    }
}

#[test]
fn xi_tracks_m_norm_under_ic0() {
    let a = diffusion_2d(12);
    let b = random_rhs(a.n(), 18);
    let m = Preconditioner::ic0(&a).unwrap();
    let trace = traced_run(&a, &b, &m, config(), 60);
    let sat = trace.saturation();
    for row in &trace.report.rows()[1..=sat] {
        let direct = trace.xnorm2[row.k].sqrt();
        assert!(rel(row.xnorm2.sqrt(), direct) <= 1e-10, "k {}", row.k);
    }
}

#[test]
fn backward_error_matches_independent_evaluation() {
    let (a, _) = random_spd(20, 1e3, &mut seeded_rng(19));
    let b = random_rhs(20, 20);
    let m = Preconditioner::identity(20);
    let mut at_ten = None;
    let options = SolveOptions {
        max_iters: 15,
        stop: &NeverStop,
        monitor: config(),
        x0: None,
        parallel_matvec: false,
    };
    let report = solve(&a, &b, &m, &options, |s, _| {
        if s.k() == 10 {
            at_ten = Some(norm2(s.r()));
        }
    })
    .unwrap();
    let row = &report.rows()[10];
    let expected = at_ten.unwrap() / (row.ritz_max.unwrap() * row.xnorm2.sqrt() + norm2(&b));
    assert!(rel(row.backward_error.unwrap(), expected) <= 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // rho_max <= ||A||, so the estimate sits at or above the normwise
    // backward error of x_k as long as the recursive residual still tracks
    // the true one, which differs by about eps / backward_error relative.
    #[test]
    fn backward_error_estimate_is_close_to_oracle(n in 10usize..40, kappa in 10.0f64..1e4, seed in any::<u64>()) {
        let (a, _) = random_spd(n, kappa, &mut seeded_rng(seed));
        let b = random_rhs(n, seed ^ 3);
        let (_, lmax) = extreme_eigenvalues(&a).unwrap();
        let trace = traced_run(&a, &b, &Preconditioner::identity(n), config(), 2 * n);
        let xs = {
            let options = SolveOptions { max_iters: 2 * n, stop: &NeverStop, monitor: config(), x0: None, parallel_matvec: false };
            let mut xs = Vec::new();
            solve(&a, &b, &Preconditioner::identity(n), &options, |s, _| xs.push(s.x().to_vec())).unwrap();
            xs
        };
        for row in &trace.report.rows()[1..trace.saturation()] {
            let x = &xs[row.k];
            let oracle = backward_error(norm2(&residual2(&a, &b, x)), lmax, norm2(x), norm2(&b)).unwrap();
            if oracle < 1e-9 {
                break;
            }
            let estimate = row.backward_error.unwrap();
            prop_assert!(estimate >= oracle * (1.0 - 1e-6), "k {} est {estimate:e} oracle {oracle:e}", row.k);
            prop_assert!(estimate <= oracle * 2.0 * kappa.sqrt(), "k {} est {estimate:e} oracle {oracle:e}", row.k);
        }
    }
}
