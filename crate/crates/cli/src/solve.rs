use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cgbounds::cg::{cholesky_bidiagonal, BackwardError, ErrorBound, IterationRecord, NeverStop, RelativeResidual, StopRule};
use cgbounds::monitor::{Estimates, MonitorConfig};
use cgbounds::oracle::{bidiagonal_extremes_bisection, residual2, ReferenceSolution};
use cgbounds::ritz::RefineCadence;
use cgbounds::session::{solve, SolveOptions, Termination};
use cgbounds::solnorm::precond_backward_error;
use cgbounds::sparse::dot;
use cgbounds::Error;

use crate::args::{MuMode, SolveArgs, StopArg};
use crate::output::{svg_chart, write_csv, Column};
use crate::system::System;
use crate::CliError;

/// Per-iterate quantities measured against the dense reference solution.
struct Oracle {
    reference: ReferenceSolution,
    lambda_min: f64,
    lambda_max: f64,
    b_minv2: f64,
    true_err2: Vec<f64>,
    backward: Vec<f64>,
}

impl Oracle {
    fn new(sys: &System) -> Result<Self, CliError> {
        let (lambda_min, lambda_max) = sys.oracle_extremes()?;
        Ok(Self {
            reference: ReferenceSolution::new(&sys.a, &sys.b)?,
            lambda_min,
            lambda_max,
            b_minv2: dot(&sys.m.apply_inverse(&sys.b)?, &sys.b),
            true_err2: Vec::new(),
            backward: Vec::new(),
        })
    }

    fn observe(&mut self, sys: &System, x: &[f64]) -> Result<(), Error> {
        self.true_err2.push(self.reference.error_anorm2(x));
        let r = residual2(&sys.a, &sys.b, x);
        let ztr = dot(&sys.m.apply_inverse(&r)?, &r);
        let eta = precond_backward_error(ztr, self.lambda_max, sys.m.m_norm2(x)?, self.b_minv2)?;
        self.backward.push(eta);
        Ok(())
    }
}

pub fn run(args: &SolveArgs) -> Result<u8, CliError> {
    let sys = System::load(&args.system)?;
    let mut oracle = if args.verify { Some(Oracle::new(&sys)?) } else { None };
    let mu = match args.mu {
        MuMode::Fixed(v) => Some(v),
        MuMode::Auto => None,
        MuMode::Oracle => Some(match &oracle {
            Some(o) => o.lambda_min,
            None => sys.oracle_extremes()?.0,
        }),
    };
    let stop: Box<dyn StopRule> = match (args.tol, args.stop) {
        (None, _) => Box::new(NeverStop),
        (Some(t), None | Some(StopArg::Residual)) => Box::new(RelativeResidual(t)),
        (Some(t), Some(StopArg::Backward)) => Box::new(BackwardError(t)),
        (Some(t), Some(StopArg::ErrorBound)) => Box::new(ErrorBound(t)),
    };
    let options = SolveOptions {
        max_iters: sys.max_iters,
        stop: stop.as_ref(),
        monitor: MonitorConfig {
            mu,
            delay: args.delay,
            refine: args.refine.then_some(RefineCadence::EveryStep),
        },
        x0: None,
        parallel_matvec: true,
    };
    let mut oracle_error = None;
    let report = solve(&sys.a, &sys.b, &sys.m, &options, |state, _| {
        if let Some(o) = oracle.as_mut() {
            if let Err(e) = o.observe(&sys, state.x()) {
                oracle_error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = oracle_error {
        return Err(e.into());
    }

    let rows = report.rows();
    let ks: Vec<usize> = rows.iter().map(|r| r.k).collect();
    let columns = columns(rows, sys.preconditioned(), oracle.as_ref());
    match &args.log {
        Some(path) => write_log(path, &ks, &columns)?,
        None => write_csv(&mut io::stdout().lock(), &ks, &columns)?,
    }
    if let Some(path) = &args.plot {
        let series: Vec<(&str, &[Option<f64>])> = columns
            .iter()
            .filter(|c| {
                matches!(
                    c.name.as_str(),
                    "true_err_anorm" | "gauss_lower" | "gauss_radau_upper" | "new_upper" | "approx_upper"
                )
            })
            .filter_map(|c| Some((c.name.as_str(), c.floats()?)))
            .collect();
        fs::write(path, svg_chart("A-norm of the error", &ks, &series)).map_err(Error::from)?;
    }

    let mut code = 0;
    if let Termination::Breakdown(e) = &report.termination {
        eprintln!("breakdown: {e}");
        code = 2;
    }
    if let Some(o) = &oracle {
        let checks = verify(rows, &report.records, o, mu);
        for c in &checks {
            eprintln!(
                "verify: {:<4} {} ({} checked{})",
                if c.failures == 0 { "PASS" } else { "FAIL" },
                c.name,
                c.checked,
                if c.failures > 0 { format!(", {} failed, worst {:.2e}", c.failures, c.worst) } else { String::new() }
            );
        }
        if code == 0 && checks.iter().any(|c| c.failures > 0) {
            code = 4;
        }
    }
    Ok(code)
}

pub fn write_log(path: &Path, ks: &[usize], columns: &[Column]) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(Error::from)?;
    let mut out = BufWriter::new(file);
    write_csv(&mut out, ks, columns)?;
    out.flush()?;
    Ok(())
}

fn columns(rows: &[Estimates], preconditioned: bool, oracle: Option<&Oracle>) -> Vec<Column> {
    let get = |f: fn(&Estimates) -> Option<f64>| rows.iter().map(f).collect::<Vec<_>>();
    let sqrt = |f: fn(&Estimates) -> Option<f64>| rows.iter().map(|r| f(r).map(f64::sqrt)).collect::<Vec<_>>();
    let mut cols = vec![
        Column::float("rnorm", get(|r| Some(r.residual_norm))),
        Column::float("gauss_lower", sqrt(|r| r.gauss_lower)),
        Column::float("gauss_radau_upper", sqrt(|r| r.gauss_radau_upper)),
        Column::flag(
            "gauss_radau_tainted",
            rows.iter().map(|r| r.gauss_radau_upper.map(|_| r.gauss_radau_tainted)).collect(),
        ),
        Column::float("new_upper", sqrt(|r| r.new_upper)),
        Column::float("approx_upper", sqrt(|r| r.approx_upper)),
        Column::float("ritz_max_cheap", get(|r| r.ritz_max)),
        Column::float("ritz_min_cheap", get(|r| r.ritz_min)),
        Column::float("ritz_max_refined", get(|r| r.ritz_max_refined)),
        Column::float("ritz_min_refined", get(|r| r.ritz_min_refined)),
        Column::float(
            if preconditioned { "xi_sqrt_mnorm" } else { "xi_sqrt" },
            sqrt(|r| Some(r.xnorm2)),
        ),
        Column::float("backward_err_precond", get(|r| r.backward_error)),
    ];
    if let Some(o) = oracle {
        cols.push(Column::float("backward_err_oracle", o.backward.iter().map(|v| Some(*v)).collect()));
        cols.push(Column::float("true_err_anorm", o.true_err2.iter().map(|v| Some(v.sqrt())).collect()));
    }
    cols
}

struct Check {
    name: &'static str,
    checked: usize,
    failures: usize,
    worst: f64,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    /// Records `value <= limit`, with the relative excess as the severity.
    fn le(&mut self, value: f64, limit: f64) {
        self.checked += 1;
        if value > limit {
            self.failures += 1;
            self.worst = self.worst.max((value - limit) / limit.abs().max(f64::MIN_POSITIVE));
        }
    }
}

/// Rounding in the squared bounds grows like eps ||x||_A^2 / ||x - x_k||_A^2,
/// so the 1e-10 checks stop once the relative error drops below this.
const BOUND_CHECK_FLOOR: f64 = 1e-4;

fn verify(rows: &[Estimates], records: &[IterationRecord], o: &Oracle, mu: Option<f64>) -> Vec<Check> {
    let mut lower = Check::new("gauss_lower <= true error");
    let mut radau = Check::new("untainted gauss_radau_upper >= true error");
    let mut chain = Check::new("untainted gauss_radau_upper <= new_upper");
    let mut ritz = Check::new("Ritz estimates inside [theta_min, theta_max] of T_k");
    // Gauss-Radau is a bound only for a node below the spectrum
    let node_below = mu.is_some_and(|m| m <= o.lambda_min);
    let e0 = o.true_err2[0];
    for row in rows {
        let t = o.true_err2[row.k];
        if t >= BOUND_CHECK_FLOOR * BOUND_CHECK_FLOOR * e0 {
            if let Some(lo) = row.gauss_lower {
                lower.le(lo, t * (1.0 + 1e-10));
            }
            if let (true, Some(gr), false) = (node_below, row.gauss_radau_upper, row.gauss_radau_tainted) {
                radau.le(t * (1.0 - 1e-10), gr);
            }
        }
        if let (true, Some(gr), false, Some(nu)) = (node_below, row.gauss_radau_upper, row.gauss_radau_tainted, row.new_upper) {
            chain.le(gr, nu * (1.0 + 1e-12));
        }
        if row.k > 0 {
            let (alphas, betas) = cholesky_bidiagonal(records, row.k);
            if let Ok((smax, smin)) = bidiagonal_extremes_bisection(&alphas, &betas) {
                let (tmin, tmax) = (smin * smin, smax * smax);
                for v in [row.ritz_max, row.ritz_max_refined].into_iter().flatten() {
                    ritz.le(v, tmax * (1.0 + 1e-12));
                }
                for v in [row.ritz_min, row.ritz_min_refined].into_iter().flatten() {
                    ritz.le(tmin * (1.0 - 1e-12), v);
                }
            }
        }
    }
    vec![lower, radau, chain, ritz]
}
