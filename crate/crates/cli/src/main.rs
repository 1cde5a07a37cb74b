// SPDX-License-Identifier: Apache-2.0

//! `formclass`: class groups of level N, class invariants and their applications.

mod cache;
mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use formclass::Error;
use num_bigint::BigInt;

use crate::config::{OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "formclass", version, about = "Form class groups of level N and their class invariants")]
struct Cli {
    /// Working precision in decimal digits (50..=3200).
    #[arg(long, global = true, env = "FORMCLASS_DIGITS")]
    digits: Option<u32>,

    /// Extra guard digits carried internally.
    #[arg(long, global = true, default_value_t = formclass::numerics::DEFAULT_GUARD)]
    guard: u32,

    /// Directory for cached minimal polynomials.
    #[arg(long, global = true, env = "FORMCLASS_CACHE")]
    cache_dir: Option<std::path::PathBuf>,

    /// Disable the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Time budget for integer factorization, in seconds.
    #[arg(long, global = true, default_value_t = 60)]
    factor_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LevelArgs {
    /// Level N.
    #[arg(long)]
    level: u64,
    /// Subgroup G of (Z/N)^x: `trivial`, `full`, or comma-separated residues.
    #[arg(long)]
    subgroup: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the classes of level N (and optionally the composition table).
    Classgroup {
        #[arg(long, allow_negative_numbers = true)]
        disc: BigInt,
        #[command(flatten)]
        level: LevelArgs,
        /// Include the full composition table.
        #[arg(long)]
        table: bool,
    },
    /// Minimal polynomial over Q of the class invariant, with its discriminant factored.
    Minpoly {
        /// Use the discriminant -4n.
        #[arg(long, conflicts_with = "disc", required_unless_present = "disc")]
        n: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        disc: Option<BigInt>,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Compare x^2 + ny^2 representability with the root criterion for all primes below a bound.
    Primes {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        bound: u64,
    },
    /// Check the Kronecker congruence relation at a prime.
    Kronecker {
        #[arg(long, allow_negative_numbers = true)]
        disc: BigInt,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        prime: u64,
    },
}

/// Process exit status by failure category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 1,
    Precision = 2,
    Verification = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

/// Exit category for a library error.
pub fn classify(err: &Error) -> Exit {
    match err {
        Error::PrecisionExhausted { .. } | Error::DivideByZero => Exit::Precision,
        Error::AmbiguousClass { .. }
        | Error::ResidualTooLarge { .. }
        | Error::NotPrimitive(..)
        | Error::ParityViolation
        | Error::FactorTimeout => Exit::Verification,
        Error::NonNegativeInput(_)
        | Error::BadDiscriminant(_)
        | Error::DiscMismatch { .. }
        | Error::NotPrimeToN
        | Error::NotInLevelSet(_)
        | Error::LeadingCoeffVanishes(_)
        | Error::PDividesD(_)
        | Error::ConditionViolated(_)
        | Error::ExcludedPrime(_)
        | Error::IncompatibleLevels(_)
        | Error::InvalidLevel(_)
        | Error::InvalidArgument(_) => Exit::Input,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Input } else { Exit::Ok };
            let _ = e.print();
            return code.into();
        }
    };
    let cfg = match RunConfig::from_flags(
        cli.digits,
        cli.guard,
        cli.cache_dir,
        cli.no_cache,
        cli.format,
        cli.factor_budget,
    ) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return Exit::Input.into();
        }
    };
    let outcome = match cli.command {
        Command::Classgroup { disc, level, table } => {
            commands::classgroup(&cfg, &disc, level.level, &level.subgroup, table)
        }
        Command::Minpoly { n, disc, level } => {
            let disc = disc.unwrap_or_else(|| -BigInt::from(4u64) * n.expect("clap enforces one of n, disc"));
            commands::minpoly(&cfg, &disc, level.level, &level.subgroup)
        }
        Command::Primes { n, level, bound } => commands::primes(&cfg, n, level.level, &level.subgroup, bound),
        Command::Kronecker { disc, level, prime } => {
            commands::kronecker(&cfg, &disc, level.level, &level.subgroup, prime)
        }
    };
    match outcome {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            classify(&e).into()
        }
    }
}
