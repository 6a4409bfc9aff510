//! `kldiv`: value, Jacobian and Hessian of the Gaussian KL divergence, plus
//! the numerical verification suites, from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed input
//! (including usage errors), 3 the instance parsed but is not valid
//! (not symmetric, not positive definite).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kldiv::Basis;

#[derive(Debug, Parser)]
#[command(name = "kldiv", version, about = "KL divergence between multivariate Gaussians: value, Jacobian, Hessian and their numerical checks")]
struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Vec,
    Vech,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Vec => Basis::Vec,
            BasisArg::Vech => Basis::Vech,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print KL[q || p].
    Kld { path: PathBuf },
    /// Print Jacobian blocks.
    Jacobian(JacobianArgs),
    /// Print Hessian blocks.
    Hessian(HessianArgs),
    /// Compare the closed forms against finite differences.
    Check(CheckArgs),
    /// Run the randomized matrix-identity suite.
    Identities(IdentityArgs),
}

#[derive(Debug, Args)]
struct JacobianArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = BasisArg::Vech)]
    basis: BasisArg,
    /// m, w, S, V or all.
    #[arg(long, default_value = "all")]
    block: String,
}

#[derive(Debug, Args)]
struct HessianArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = BasisArg::Vech)]
    basis: BasisArg,
    /// Two-letter row/column selector (mm, mV, SV, ...) or all.
    #[arg(long, default_value = "all")]
    block: String,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Instance file; omit when using --random.
    #[arg(conflicts_with = "random", required_unless_present = "random")]
    path: Option<PathBuf>,
    /// Check seeded random instances of this dimension instead of a file.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol_grad: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_hess: f64,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 3, 5])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Format::Json = cli.format;

    let result = match cli.command {
        Command::Kld { path } => commands::kld(&path),
        Command::Jacobian(a) => commands::jacobian(&a.path, a.basis.into(), &a.block),
        Command::Hessian(a) => commands::hessian(&a.path, a.basis.into(), &a.block),
        Command::Check(a) => {
            let source = match (a.path, a.random) {
                (Some(path), _) => commands::CheckSource::File(path),
                (None, Some(n)) => commands::CheckSource::Random {
                    n: n as usize,
                    seed: a.seed,
                    trials: a.trials as usize,
                },
                (None, None) => unreachable!("clap requires one of path or --random"),
            };
            commands::check(source, a.tol_grad, a.tol_hess)
        }
        Command::Identities(a) => commands::identities(a.seed, &a.dims, a.trials as usize),
    };

    match result {
        Ok(outcome) => {
            let text = outcome.document.to_json();
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
