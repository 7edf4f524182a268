use std::fs;
use std::io;

use cgbounds::cg::NeverStop;
use cgbounds::monitor::MonitorConfig;
use cgbounds::oracle::ReferenceSolution;
use cgbounds::par::par_map;
use cgbounds::session::{solve, SolveOptions, SolveReport};
use cgbounds::Error;

use crate::args::SweepArgs;
use crate::output::{svg_chart, write_csv, Column};
use crate::solve::write_log;
use crate::system::System;
use crate::CliError;

pub fn run(args: &SweepArgs) -> Result<u8, CliError> {
    if args.from > args.to {
        return Err(CliError::Usage(format!("--from {} is above --to {}", args.from, args.to)));
    }
    let sys = System::load(&args.system)?;
    let (lambda_min, _) = sys.oracle_extremes()?;
    let reference = ReferenceSolution::new(&sys.a, &sys.b)?;
    let exponents: Vec<i32> = (args.from..=args.to).collect();

    let run_one = |mu: f64, observe: bool| -> Result<(SolveReport, Vec<f64>), Error> {
        let options = SolveOptions {
            max_iters: sys.max_iters,
            stop: &NeverStop,
            monitor: MonitorConfig {
                mu: Some(mu),
                delay: args.delay,
                refine: None,
            },
            x0: None,
            parallel_matvec: false,
        };
        let mut err = Vec::new();
        let report = solve(&sys.a, &sys.b, &sys.m, &options, |s, _| {
            if observe {
                err.push(reference.error_anorm(s.x()));
            }
        })?;
        Ok((report, err))
    };
    let runs = par_map(&exponents, |&m| run_one(lambda_min / (1.0 + 10f64.powi(-m)), m == args.from));
    let mut reports = Vec::new();
    let mut true_err = Vec::new();
    for (i, r) in runs.into_iter().enumerate() {
        let (report, err) = r?;
        if i == 0 {
            true_err = err;
        }
        reports.push(report);
    }

    let len = reports.iter().map(|r| r.rows().len()).min().unwrap_or(0);
    let ks: Vec<usize> = (0..len).collect();
    let mut columns = vec![Column::float("true_err_anorm", true_err[..len].iter().map(|v| Some(*v)).collect())];
    for (m, report) in exponents.iter().zip(&reports) {
        let rows = &report.rows()[..len];
        columns.push(Column::float(
            format!("gauss_radau_upper_m{m}"),
            rows.iter().map(|r| r.gauss_radau_upper.map(f64::sqrt)).collect(),
        ));
    }
    for (m, report) in exponents.iter().zip(&reports) {
        let rows = &report.rows()[..len];
        columns.push(Column::float(
            format!("new_upper_m{m}"),
            rows.iter().map(|r| r.new_upper.map(f64::sqrt)).collect(),
        ));
    }
    match &args.log {
        Some(path) => write_log(path, &ks, &columns)?,
        None => write_csv(&mut io::stdout().lock(), &ks, &columns)?,
    }
    if let Some(path) = &args.plot {
        let series: Vec<(&str, &[Option<f64>])> = columns
            .iter()
            .filter(|c| !c.name.starts_with("new_upper"))
            .filter_map(|c| Some((c.name.as_str(), c.floats()?)))
            .collect();
        fs::write(path, svg_chart("Gauss-Radau upper bounds, mu = lambda_min / (1 + 10^-m)", &ks, &series))
            .map_err(Error::from)?;
    }
    let broken = reports.iter().find_map(|r| match &r.termination {
        cgbounds::session::Termination::Breakdown(e) => Some(e),
        _ => None,
    });
    if let Some(e) = broken {
        eprintln!("breakdown: {e}");
        return Ok(2);
    }
    Ok(0)
}
