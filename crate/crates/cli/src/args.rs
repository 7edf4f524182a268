use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cgbounds", version, about = "CG/PCG with online error bounds, Ritz estimates and backward errors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one system and log the diagnostics of every iteration.
    Solve(SolveArgs),
    /// Gauss-Radau bounds for the nodes mu = lambda_min / (1 + 10^-m).
    MuSweep(SweepArgs),
    /// Write a test matrix in Matrix Market format.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Symmetric positive definite matrix in Matrix Market coordinate format.
    #[arg(long)]
    pub matrix: PathBuf,
    /// file:<path>, ones, random:<seed>, e_last or eigen_equal.
    #[arg(long, default_value = "ones")]
    pub rhs: RhsMode,
    #[arg(long, value_enum, default_value_t = PrecondArg::None)]
    pub precond: PrecondArg,
    /// Defaults to twice the matrix order.
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// fixed:<value>, auto (no fixed node; only the Ritz-based
    /// approximate bound) or oracle (dense lambda_min).
    #[arg(long, default_value = "auto")]
    pub mu: MuMode,
    #[arg(long, default_value_t = 0)]
    pub delay: usize,
    /// Stopping tolerance; without it only --max-iters stops the run.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quantity compared against --tol.
    #[arg(long, value_enum, requires = "tol")]
    pub stop: Option<StopArg>,
    /// Refine the extreme Ritz estimates at every iteration.
    #[arg(long)]
    pub refine: bool,
    /// Add dense oracle columns and check the bound invariants.
    #[arg(long)]
    pub verify: bool,
    /// CSV log; standard output when omitted.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// SVG chart of the error columns.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 2)]
    pub from: i32,
    #[arg(long, default_value_t = 14)]
    pub to: i32,
    #[arg(long, default_value_t = 0)]
    pub delay: usize,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Variable-coefficient 2D diffusion on an m x m grid.
    Diffusion {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random orthogonal similarity of a diagonal with eigenvalues in [1, kappa].
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecondArg {
    None,
    Jacobi,
    Ic0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StopArg {
    /// ||r_k|| <= tol ||b||
    Residual,
    /// Cheap backward error <= tol.
    Backward,
    /// Upper bound on the relative A-norm error <= tol.
    ErrorBound,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RhsMode {
    File(PathBuf),
    Ones,
    Random(u64),
    ELast,
    EigenEqual,
}

impl FromStr for RhsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ones" => Ok(Self::Ones),
            "e_last" => Ok(Self::ELast),
            "eigen_equal" => Ok(Self::EigenEqual),
            _ => {
                if let Some(path) = s.strip_prefix("file:") {
                    Ok(Self::File(path.into()))
                } else if let Some(seed) = s.strip_prefix("random:") {
                    seed.parse().map(Self::Random).map_err(|e| format!("bad seed {seed:?}: {e}"))
                } else {
                    Err(format!("unknown rhs {s:?}"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuMode {
    Fixed(f64),
    Auto,
    Oracle,
}

impl FromStr for MuMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "oracle" => Ok(Self::Oracle),
            _ => {
                let v = s.strip_prefix("fixed:").ok_or_else(|| format!("unknown mu {s:?}"))?;
                let v: f64 = v.parse().map_err(|e| format!("bad mu {v:?}: {e}"))?;
                if v > 0.0 && v.is_finite() {
                    Ok(Self::Fixed(v))
                } else {
                    Err(format!("mu must be positive, got {v}"))
                }
            }
        }
    }
}
