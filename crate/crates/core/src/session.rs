//! Drives a CG/PCG solve with the diagnostics monitor attached.

use crate::cg::{CgState, IterationRecord, StopContext, StopRule};
use crate::error::{Error, Result};
use crate::monitor::{Estimates, Monitor, MonitorConfig, StartInfo};
use crate::sparse::{dot, norm2, Preconditioner, SparseSymMatrix};

pub struct SolveOptions<'a> {
    /// Hard iteration limit; always enforced.
    pub max_iters: usize,
    pub stop: &'a dyn StopRule,
    pub monitor: MonitorConfig,
    pub x0: Option<&'a [f64]>,
    pub parallel_matvec: bool,
}

#[derive(Debug)]
pub enum Termination {
    /// The recursive residual became exactly zero.
    Converged,
    StopRule,
    MaxIters,
    /// CG or an estimator failed; the rows up to the failure are kept.
    Breakdown(Error),
}

#[derive(Debug)]
pub struct SolveReport {
    pub records: Vec<IterationRecord>,
    pub x: Vec<f64>,
    pub termination: Termination,
    pub monitor: Monitor,
    pub rhs_norm: f64,
}

impl SolveReport {
    pub fn rows(&self) -> &[Estimates] {
        self.monitor.rows()
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

/// Solves `A x = b` and feeds every record to a [`Monitor`].
///
/// `observer` sees the solver state once before the first step (with no
/// record) and after every successful step. Setup errors are returned;
/// failures while iterating end the run with [`Termination::Breakdown`].
pub fn solve<F>(
    a: &SparseSymMatrix,
    b: &[f64],
    precond: &Preconditioner,
    options: &SolveOptions<'_>,
    mut observer: F,
) -> Result<SolveReport>
where
    F: FnMut(&CgState, Option<&IterationRecord>),
{
    let mut state = CgState::new(a, b, options.x0, precond)?.with_parallel_matvec(options.parallel_matvec);
    let rhs_minv_norm2 = dot(&precond.apply_inverse(b)?, b);
    let x0 = match options.x0 {
        Some(x0) if x0.iter().any(|v| *v != 0.0) => Some((precond.m_norm2(x0)?, dot(x0, state.r()))),
        _ => None,
    };
    let start = StartInfo {
        rnorm2: state.rnorm2(),
        residual_norm: state.residual_norm(),
        rhs_minv_norm2,
        x0,
    };
    let mut monitor = Monitor::new(options.monitor, start)?;
    let rhs_norm = norm2(b);
    let mut records = Vec::new();
    observer(&state, None);

    let termination = loop {
        if records.len() >= options.max_iters {
            break Termination::MaxIters;
        }
        let record = match state.step(a, precond) {
            Ok(r) => r,
            Err(e) => break Termination::Breakdown(e),
        };
        let x0_dot_r = x0.map(|_| dot(options.x0.expect("x0 present"), state.r()));
        if let Err(e) = monitor.push(&record, x0_dot_r) {
            break Termination::Breakdown(e);
        }
        records.push(record);
        observer(&state, Some(&record));
        if state.converged() {
            break Termination::Converged;
        }
        let latest = monitor.latest();
        let ctx = StopContext {
            k: record.k,
            residual_norm: record.residual_norm,
            rhs_norm,
            backward_error: latest.backward_error,
            error_upper_sq: monitor.latest_upper().map(|(_, u)| u),
            energy_sq: monitor.energy(),
        };
        if options.stop.should_stop(&ctx) {
            break Termination::StopRule;
        }
    };
    monitor.finish();
    Ok(SolveReport {
        records,
        x: state.into_solution(),
        termination,
        monitor,
        rhs_norm,
    })
}
