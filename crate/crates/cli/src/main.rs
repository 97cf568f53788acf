mod commands;
mod error;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use proxlab::instances::Family;
use proxlab::measures::Norm;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "proxlab",
    version,
    about = "Exact lower-bound instances for ILP proximity and sensitivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file for one family.
    Gen {
        family: FamilyArg,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        d: usize,
        /// Output path; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Configuration enumeration budget for the bin-packing families.
        #[arg(long, default_value_t = proxlab::instances::DEFAULT_CONFIG_BUDGET)]
        budget: usize,
    },
    /// Check polytopish hulls, the Petersen matchings or the norm claim.
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// LP-call budget (polytopish) or node budget (claims).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Measure sensitivity or a proximity lower bound.
    Measure {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Fractional point (JSON array) for instances without a built-in one.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Print a CSV header and row instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Measure a grid of parameters into CSV rows.
    Sweep {
        family: FamilyArg,
        /// Values such as `1..4` or `2,4,6`; ranges are inclusive.
        #[arg(long)]
        delta: String,
        #[arg(long)]
        d: String,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Random small instances checked against the Cook bounds.
    Fuzz {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Subdeterminants and Cook bounds of an instance.
    Bounds {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, default_value_t = proxlab::exactla::DEFAULT_SUBDET_BUDGET)]
        budget: u64,
        /// Enumerate even when over budget.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct MeasureArgs {
    #[arg(long, value_enum, default_value_t = NormArg::Linf)]
    norm: NormArg,
    /// Node budget of the integral enumeration.
    #[arg(long, default_value_t = proxlab::ilp::DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Subdeterminant enumeration budget.
    #[arg(long, default_value_t = proxlab::exactla::DEFAULT_SUBDET_BUDGET)]
    subdet_budget: u64,
    /// Fail instead of using the Hadamard bound when over the subdeterminant budget.
    #[arg(long)]
    no_hadamard_fallback: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Sensitivity,
    Proximity,
    BinpackSens,
    BinpackProx,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Sensitivity => Family::Sensitivity,
            FamilyArg::Proximity => Family::Proximity,
            FamilyArg::BinpackSens => Family::BinpackSens,
            FamilyArg::BinpackProx => Family::BinpackProx,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Polytopish,
    Matchings,
    Claims,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Sens,
    Prox,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NormArg {
    L1,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::L1 => Norm::L1,
            NormArg::Linf => Norm::Linf,
        }
    }
}

/// Whether the requested checks held.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
}

fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Gen {
            family,
            delta,
            d,
            out,
            budget,
        } => commands::gen(family.into(), delta, d, out.as_deref(), budget),
        Command::Verify {
            check,
            input,
            budget,
        } => commands::verify(check, input.as_deref(), budget),
        Command::Measure {
            input,
            kind,
            measure,
            certificate,
            csv,
        } => commands::measure(&input, kind, &measure, certificate.as_deref(), csv),
        Command::Sweep {
            family,
            delta,
            d,
            measure,
            out,
        } => sweep::sweep(family.into(), &delta, &d, &measure, out.as_deref()),
        Command::Fuzz { seed, trials } => commands::fuzz(seed, trials),
        Command::Bounds {
            input,
            budget,
            force,
        } => commands::bounds(&input, budget, force),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Passed) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
