//! `fincodensity`: command-line front end for the verification harnesses.
//!
//! Global settings resolve as flag > environment variable > default.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fincodensity::report::{EXIT_CHECK_FAILED, EXIT_INVALID_INPUT, EXIT_TOO_LARGE};
use fincodensity::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fincodensity",
    version,
    about = "Finite codensity monad verification harnesses"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Largest |X| used by `verify all` and by defaulted sizes.
    #[arg(long, global = true, env = "FINCODENSITY_MAX_SIZE", default_value_t = 3)]
    pub max_size: usize,
    /// Largest operation arity in operadic computations.
    #[arg(long, global = true, env = "FINCODENSITY_MAX_ARITY", default_value_t = 2)]
    pub max_arity: usize,
    /// Enumeration cap on any materialized set.
    #[arg(long, global = true, env = "FINCODENSITY_CAP", default_value_t = fincodensity::caps::DEFAULT_ENUMERATION_CAP)]
    pub cap: u128,
    /// Universe of finite-set sizes, e.g. `0,1,2,3`.
    #[arg(long, global = true, env = "FINCODENSITY_UNIVERSE")]
    pub universe: Option<String>,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, env = "FINCODENSITY_JSON")]
    pub json: Option<PathBuf>,
    /// Seed for every sampled quantifier.
    #[arg(long, global = true, env = "FINCODENSITY_SEED", default_value_t = 0x5eed)]
    pub seed: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub print_json: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Aggregate suites.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Ultrasets and ultrafilters.
    Ultra {
        #[command(subcommand)]
        what: UltraCommand,
    },
    /// Builtin monads and their terminal monads.
    Monad {
        #[command(subcommand)]
        what: MonadCommand,
    },
    /// Operadic completions.
    Operadic {
        #[command(subcommand)]
        what: OperadicCommand,
    },
    /// Codensity monads of finite sets.
    Codensity {
        #[command(subcommand)]
        what: CodensityCommand,
    },
    /// The fixed desk-scale reproduction set.
    Scorecard {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        /// Replace Maybe by a monad with a broken multiplication.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Re-run the command recorded in a JSON report and compare verdicts.
    Recheck { report: PathBuf },
}

#[derive(Debug, Clone, Subcommand)]
pub enum VerifyCommand {
    /// Every module harness up to `--max-size`.
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Us,
    Uf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Prop {
    T2us,
    T3uf,
    Partition,
}

#[derive(Debug, Clone, Subcommand)]
pub enum UltraCommand {
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        size: usize,
    },
    Verify {
        #[arg(long, value_enum)]
        prop: Prop,
        #[arg(long)]
        size: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum MonadCommand {
    Laws {
        #[arg(long)]
        spec: String,
    },
    Terminal {
        #[arg(long)]
        spec: String,
    },
    Tower {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 3)]
        max_steps: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum OperadicCommand {
    Powers {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
    },
    GroupDd {
        /// A name (`C4`, `S3`, `C2xC2`) or a JSON multiplication table.
        #[arg(long)]
        group: String,
    },
    VectDd {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum CodensityCommand {
    /// `T_D(c)` with its families.
    Object {
        /// Sizes of the objects of D, e.g. `2` or `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
        #[arg(long)]
        size: usize,
    },
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { 0 };
            let _ = e.print();
            return exit(code);
        }
    };
    match commands::run(&cli, &args[1..]) {
        Ok(outcome) => {
            if cli.global.print_json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("report serializes")
                );
            } else {
                print!("{}", outcome.text);
            }
            if let Some(path) = &cli.global.json {
                let body = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return exit(EXIT_INVALID_INPUT);
                }
            }
            exit(outcome.report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::EnumerationTooLarge { .. } => EXIT_TOO_LARGE,
        Error::InvalidInput(_) | Error::Precondition(_) => EXIT_INVALID_INPUT,
        _ => EXIT_CHECK_FAILED,
    }
}
