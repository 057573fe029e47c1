//! `efxlab`: solve, verify, generate, reduce, and benchmark EFX fair-division
//! instances from the command line.
//!
//! Exit codes: 0 success, 2 verification failure, 3 size limit exceeded,
//! 4 parse error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use efxlab_core::{Error, Limits, Pivot};

#[derive(Parser)]
#[command(name = "efxlab", version, about = "EFX fair-division toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Greedy,
    CutAndChoose,
    LeximinLocal,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Monotone,
    Submodular,
    Cancelable,
    Wwl,
    WellLayeredAtPrice,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Additive,
    BudgetAdditive,
    Oxs,
    UnitDemand,
    CoverageSubmodular,
    MonotoneTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    First,
    Best,
}

impl From<PivotArg> for Pivot {
    fn from(p: PivotArg) -> Pivot {
        match p {
            PivotArg::First => Pivot::First,
            PivotArg::Best => Pivot::Best,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Write the primary output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the enumeration cap (also settable via EFXLAB_LIMIT).
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file for an EFX allocation.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        /// Which agent cuts in cut-and-choose.
        #[arg(long, default_value_t = 0)]
        cutter: usize,
        /// Re-check the result with the EFX verifier; failures exit 2.
        #[arg(long)]
        verify: bool,
        /// Seeded-random tie-breaking for the greedy solver.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the greedy trace log to this file (default: stderr).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check a valuation file against a class property.
    CheckClass {
        valuation: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        /// Comma-separated rational prices for well-layered-at-price.
        #[arg(long)]
        prices: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a seeded valuation file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reduce between local-search problems.
    Reduce {
        #[command(subcommand)]
        which: ReduceCommand,
    },
    /// Run a circuit through flip -> Kneser -> EFX and back.
    Pipeline {
        circuit: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the generic local-search runner on a circuit objective.
    Search {
        circuit: PathBuf,
        /// Interpret the circuit as a Kneser instance with this k
        /// (default: plain bit-flip minimization).
        #[arg(long)]
        k: Option<usize>,
        /// Kneser optimization direction.
        #[arg(long, value_enum, default_value = "maximize")]
        direction: DirectionArg,
        /// Starting point (bits as an integer); defaults to the smallest
        /// feasible point.
        #[arg(long)]
        start: Option<u64>,
        #[arg(long, value_enum, default_value = "best")]
        pivot: PivotArg,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run every instance in a directory and emit a CSV table.
    Bench {
        corpus: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Minimize,
    Maximize,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Flip instance -> minimization Kneser instance.
    FlipToKneser {
        circuit: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Maximization Kneser instance -> 2-agent identical EFX instance.
    KneserToEfx {
        circuit: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn limits_from(common: &CommonOpts) -> Limits {
    let mut limits = Limits::default();
    if let Ok(env_cap) = std::env::var("EFXLAB_LIMIT") {
        if let Ok(cap) = env_cap.parse::<u64>() {
            limits = limits.with_enumeration(cap);
        }
    }
    if let Some(cap) = common.limit {
        limits = limits.with_enumeration(cap);
    }
    limits
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<Error>() {
        return match core {
            Error::LimitExceeded { .. } => 3,
            Error::Parse(_) => 4,
            _ => 1,
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return 4;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(status) => ExitCode::from(status),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
