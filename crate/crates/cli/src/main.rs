mod args;
mod output;
mod solve;
mod sweep;
mod system;

use std::fs;
use std::io::BufWriter;
use std::process::ExitCode;

use clap::Parser;
use cgbounds::generators::{diffusion_2d, random_spd, seeded_rng};
use cgbounds::sparse::{write_matrix_market, SparseSymMatrix};
use cgbounds::Error;

use args::{Cli, Command, GenerateKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Core(Error::Io(e))
    }
}

impl CliError {
    /// 1 usage, 2 breakdown, 3 I/O or parse.
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Core(e) => match e {
                Error::Io(_)
                | Error::Parse { .. }
                | Error::UnsupportedFormat(_)
                | Error::InvalidMatrix(_)
                | Error::DimensionMismatch { .. } => 3,
                Error::InvalidArgument(_) | Error::VerifyLimit { .. } => 1,
                _ => 2,
            },
        }
    }
}

fn generate(kind: &GenerateKind) -> Result<u8, CliError> {
    let (a, out): (SparseSymMatrix, _) = match kind {
        GenerateKind::Diffusion { size, out } => {
            if *size == 0 {
                return Err(CliError::Usage("--size must be positive".into()));
            }
            (diffusion_2d(*size), out)
        }
        GenerateKind::Random { n, kappa, seed, out } => {
            if *n == 0 || kappa.is_nan() || *kappa < 1.0 {
                return Err(CliError::Usage("need --n >= 1 and --kappa >= 1".into()));
            }
            (random_spd(*n, *kappa, &mut seeded_rng(*seed)).0, out)
        }
    };
    let file = fs::File::create(out)?;
    write_matrix_market(&a, BufWriter::new(file))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => solve::run(args),
        Command::MuSweep(args) => sweep::run(args),
        Command::Generate { kind } => generate(kind),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
