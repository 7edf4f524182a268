use std::fs;
use std::path::Path;

use cgbounds::generators::random_rhs;
use cgbounds::oracle::{dense_eigs, eigen_equal_rhs, extreme_eigenvalues, preconditioned_operator};
use cgbounds::sparse::{read_matrix_market, Preconditioner, PreconditionerKind, SparseSymMatrix};
use cgbounds::Error;

use crate::args::{PrecondArg, RhsMode, SystemArgs};
use crate::CliError;

pub struct System {
    pub a: SparseSymMatrix,
    pub b: Vec<f64>,
    pub m: Preconditioner,
    pub max_iters: usize,
}

impl System {
    pub fn load(args: &SystemArgs) -> Result<Self, CliError> {
        let a = read_matrix_market(&args.matrix)?;
        let b = rhs(&a, &args.rhs)?;
        let kind = match args.precond {
            PrecondArg::None => PreconditionerKind::None,
            PrecondArg::Jacobi => PreconditionerKind::Jacobi,
            PrecondArg::Ic0 => PreconditionerKind::Ic0,
        };
        let m = Preconditioner::build(&a, kind)?;
        let max_iters = args.max_iters.unwrap_or(2 * a.n());
        Ok(Self { a, b, m, max_iters })
    }

    pub fn preconditioned(&self) -> bool {
        !self.m.is_identity()
    }

    /// `(lambda_min, lambda_max)` of the operator CG actually sees.
    pub fn oracle_extremes(&self) -> Result<(f64, f64), CliError> {
        if !self.preconditioned() {
            return Ok(extreme_eigenvalues(&self.a)?);
        }
        let eigs = dense_eigs(&preconditioned_operator(&self.a, &self.m)?)?;
        Ok((eigs[0], eigs[eigs.len() - 1]))
    }
}

fn rhs(a: &SparseSymMatrix, mode: &RhsMode) -> Result<Vec<f64>, CliError> {
    let n = a.n();
    let b = match mode {
        RhsMode::Ones => vec![1.0; n],
        RhsMode::Random(seed) => random_rhs(n, *seed),
        RhsMode::ELast => {
            let mut b = vec![0.0; n];
            if let Some(last) = b.last_mut() {
                *last = 1.0;
            }
            b
        }
        RhsMode::EigenEqual => eigen_equal_rhs(a)?,
        RhsMode::File(path) => read_vector(path)?,
    };
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        }
        .into());
    }
    Ok(b)
}

/// Whitespace-separated numbers; `%` starts a comment line. A Matrix Market
/// array header (`%%MatrixMarket matrix array ...` followed by `n 1`) is
/// accepted and its size line skipped.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('%'));
    if text.starts_with("%%MatrixMarket") {
        lines.next();
    }
    let mut values = Vec::new();
    for (i, line) in lines {
        for token in line.split_whitespace() {
            let v = token.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("not a number: {token:?}"),
            })?;
            values.push(v);
        }
    }
    Ok(values)
}
