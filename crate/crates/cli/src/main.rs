//! `polar`: command-line access to polar varieties, Gröbner bases and the
//! randomized singular-locus experiment.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input error, 3 budget
//! exceeded.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polar_core::experiment::Mode;
use polar_core::polar::SingularOptions;
use polar_core::{Budget, Flavor, PrimeField, DEFAULT_PRIME};

#[derive(Parser, Debug)]
#[command(name = "polar", version, about = "Polar varieties of complete intersections over prime fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Prime modulus of the coefficient field.
    #[arg(long, global = true, env = "POLAR_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Largest number of S-pairs a Gröbner computation may treat.
    #[arg(long, global = true, default_value_t = Budget::default().max_pairs)]
    pub max_pairs: usize,
    /// Largest intermediate basis size.
    #[arg(long, global = true, default_value_t = Budget::default().max_basis)]
    pub max_basis: usize,
    /// Largest S-polynomial degree.
    #[arg(long, global = true, default_value_t = Budget::default().max_degree)]
    pub max_degree: u32,
    /// Largest number of Jacobian minors formed for a singular locus.
    #[arg(long, global = true, default_value_t = SingularOptions::default().minor_cap)]
    pub minor_cap: u128,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Global {
    pub fn field(&self) -> Result<PrimeField, CliError> {
        PrimeField::new(self.prime).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn budget(&self) -> Budget {
        Budget {
            max_pairs: self.max_pairs,
            max_basis: self.max_basis,
            max_degree: self.max_degree,
        }
    }

    pub fn singular(&self) -> SingularOptions {
        SingularOptions {
            minor_cap: self.minor_cap,
        }
    }
}

/// A system file and, for the polar constructions, a matrix.
#[derive(Args, Debug, Clone)]
pub struct PolarArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Polar index.
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long, default_value = "classic")]
    pub flavor: Flavor,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a system file and print it in normal form.
    Parse {
        #[arg(long)]
        system: PathBuf,
    },
    /// Reduced Gröbner basis (degrevlex).
    Gb {
        #[arg(long)]
        system: PathBuf,
    },
    /// Dimension of the variety (-1 when empty).
    Dim {
        #[arg(long)]
        system: PathBuf,
    },
    /// Degree of the variety (0 when empty).
    Deg {
        #[arg(long)]
        system: PathBuf,
    },
    /// Polar variety for a matrix.
    Construct(PolarArgs),
    /// Rank-drop locus Δ_i of the stacked matrix.
    Delta(PolarArgs),
    /// Singular locus of the polar variety by the Jacobian criterion.
    Singular(PolarArgs),
    /// Thom–Boardman class at a point: n - rank [J(x); a].
    Tb {
        #[command(flatten)]
        polar: PolarArgs,
        #[arg(long)]
        point: String,
    },
    /// Projective dimension of the incidence fiber over a point.
    Fiber {
        #[command(flatten)]
        polar: PolarArgs,
        #[arg(long)]
        point: String,
    },
    /// Build a singular polar variety from two quadrics and check its witness.
    Family31 {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Localized dual chain for the structured matrices with bottom row γ.
    Chain2 {
        #[arg(long)]
        system: PathBuf,
        /// JSON array with n nonzero integers; drawn from --seed when absent.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degrees for structured matrices against random ones.
    Degcmp {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized singular-locus experiment over a grid of (n, p, i).
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 2)]
    pub nmin: usize,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long)]
    pub pmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    #[arg(long, default_value = "full")]
    pub mode: Mode,
    #[arg(long, default_value = "classic")]
    pub flavor: Flavor,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    #[arg(long, default_value_t = polar_core::experiment::DEFAULT_REDRAWS)]
    pub redraws: usize,
    /// Record per-cell wall-clock time (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Located {
        path: PathBuf,
        source: polar_core::Error,
    },
    #[error(transparent)]
    Core(#[from] polar_core::Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Io { .. } | CliError::Input(_) => return 2,
            CliError::Located { source, .. } | CliError::Core(source) => source,
        };
        match core {
            polar_core::Error::Budget(_) => 3,
            polar_core::Error::RetriesExhausted(_) => 1,
            _ => 2,
        }
    }
}

/// What a command produced: its text and whether all checks held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.global, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(global: &Global, text: &str) -> Result<(), CliError> {
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
