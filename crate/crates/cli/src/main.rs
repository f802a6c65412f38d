mod commands;
mod crosscheck;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cue_moments::{DerivativeIndex, PartitionShape};

use parse::{ComplexArg, RealList};

#[derive(Debug, Parser)]
#[command(name = "cue-moments", version, about = "Joint moments of derivatives of CUE characteristic polynomials")]
struct Cli {
    /// Also write one CSV row per evaluated point to this path.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Worker threads for parallel evaluators; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Pair {
    /// Derivative orders on the holomorphic factors, e.g. "1,1".
    #[arg(long)]
    mu: DerivativeIndex,
    /// Derivative orders on the conjugated factors.
    #[arg(long)]
    nu: DerivativeIndex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SamplerArg {
    Verblunsky,
    Qr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Asymptotic,
    FiniteSigma,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GridArg {
    Quick,
    Standard,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Large-N limit inside the unit disc.
    Bulk {
        #[command(flatten)]
        pair: Pair,
        /// Point as "re" or "re,im" with |z| < 1.
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexArg,
    },
    /// Exact moment at finite N; several N give a convergence table.
    Exact {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexArg,
        /// Matrix size, or a comma-separated list of sizes.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// Microscopic limit at z = 1 - c/N.
    Micro {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexArg,
        /// Zero-pad unequal lists to a common length.
        #[arg(long)]
        pad: bool,
    },
    /// Fourth moment of the k-th derivative in the microscopic limit.
    Fourth {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        c: f64,
    },
    /// Monte Carlo estimate over Haar-random unitaries.
    Mc {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexArg,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerArg::Verblunsky)]
        sampler: SamplerArg,
        /// Report the estimate even when its relative error exceeds 0.5.
        #[arg(long)]
        allow_noisy: bool,
    },
    /// Contingency tables with the given margins.
    Tables {
        /// Row sums.
        #[arg(long)]
        mu: DerivativeIndex,
        /// Column sums; without them, `--cols` columns with free sums.
        #[arg(long)]
        nu: Option<DerivativeIndex>,
        #[arg(long)]
        cols: Option<usize>,
        /// Number of tables to list.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Kostka number K_{lambda, mu}.
    Kostka {
        #[arg(long)]
        lambda: PartitionShape,
        #[arg(long)]
        mu: DerivativeIndex,
    },
    /// Leading-order prediction for mixed zeta-derivative moments.
    ZetaPredict {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Asymptotic)]
        mode: ModeArg,
        /// Prime cutoff for the arithmetic factor.
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
    },
    /// Truncated Dirichlet mean square with its tail bound.
    ZetaSum {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        sigma: f64,
        /// Cutoff M.
        #[arg(long = "M")]
        m: u64,
    },
    /// Truncated shifted divisor sum against its zeta-quotient closed form.
    ZetaIdentity {
        #[arg(long, allow_hyphen_values = true)]
        alpha: RealList,
        #[arg(long, allow_hyphen_values = true)]
        beta: RealList,
        #[arg(long)]
        sigma: f64,
        #[arg(long = "M")]
        m: u64,
    },
    /// Arithmetic Euler product.
    EulerA {
        #[arg(long = "K")]
        k: f64,
        #[arg(long = "L")]
        l: f64,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
        #[arg(long, default_value_t = 1e-17)]
        tol: f64,
        /// Evaluate at 2 sigma instead of the limit point 1.
        #[arg(long)]
        sigma: Option<f64>,
        /// Use Gamma-ratio local coefficients (allows non-integer K, L).
        #[arg(long)]
        gamma: bool,
    },
    /// Paired comparisons between independent routes.
    Crosscheck {
        #[arg(long, value_enum, default_value_t = GridArg::Quick)]
        grid: GridArg,
        #[arg(long)]
        seed: u64,
    },
}

pub enum Failure {
    /// Invalid input or violated precondition: exit code 2.
    Invalid(String),
    /// Numerical result refused: exit code 3.
    Quality(String),
}

impl From<cue_moments::Error> for Failure {
    fn from(e: cue_moments::Error) -> Self {
        match e {
            cue_moments::Error::Cancellation { .. } => Failure::Quality(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = commands::run(cli.command);
    let (mut doc, code) = match result {
        Ok(r) => r,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Quality(msg)) => {
            eprintln!("refused: {msg}");
            return ExitCode::from(3);
        }
    };
    doc.meta.runtime_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &cli.csv {
        if let Err(e) = doc.write_csv(path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Err(e) = doc.print() {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(code)
}
