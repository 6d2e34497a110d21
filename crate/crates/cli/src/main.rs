//! `iepoly` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification predicate failed, 2 invalid input,
//! 3 a configured capacity would be exceeded.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::TypedValueParser;
use clap::{Parser, Subcommand};

use commands::{ComputeArgs, Failure};
use config::{GlobalArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "iepoly",
    version,
    about = "Heights of inclusion-exclusion polynomials"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand Q for a tuple and report its height and normalized ratio.
    Compute {
        /// Comma-separated increasing, pairwise coprime integers, each at least 2.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Skip the coefficient list.
        #[arg(long)]
        height_only: bool,
        /// Also report the coefficient at this index.
        #[arg(long)]
        coeff: Option<usize>,
        /// Compute the lower half only and mirror it.
        #[arg(long)]
        half_degree: bool,
        /// Print the coefficient list even when it is long.
        #[arg(long)]
        force_coeffs: bool,
        /// Write coefficients to FILE, one decimal per line.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build the constructed family for N and k and evaluate its bounds.
    Construct {
        #[arg(long = "N", value_name = "N")]
        n: String,
        #[arg(long)]
        k: usize,
        /// Expand the polynomial and compare its height with the floor.
        #[arg(long)]
        expand: bool,
    },
    /// Truncated product for the limiting constant.
    Constant {
        #[arg(long)]
        terms: usize,
        /// Mantissa bits; overrides --mantissa-bits.
        #[arg(long, value_parser = clap::value_parser!(u64).range(64..=65536).map(|v| v as usize))]
        bits: Option<usize>,
    },
    /// Check the congruence hypothesis for a tuple and r, and the resulting bound.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        r: String,
        /// Expand and compare the measured height with the floor.
        #[arg(long)]
        expand: bool,
    },
    /// Rank all tuples with m at most the cap by normalized ratio.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m_cap: u64,
        /// Skip tuples whose degree exceeds this many coefficients.
        #[arg(long, default_value_t = 1_000_000)]
        expand_cap: usize,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024).map(|v| v as usize))]
        jobs: usize,
        /// Number of ranked entries to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Compare the fast expansion against the brute-force oracle.
    OracleCheck {
        #[arg(long)]
        m_cap: u64,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, Failure> {
    let mut cfg = RunConfig::from(&cli.global);
    match cli.command {
        Command::Compute {
            q,
            height_only,
            coeff,
            half_degree,
            force_coeffs,
            out,
        } => commands::compute(
            &cfg,
            &ComputeArgs {
                q,
                height_only,
                coeff,
                half_degree,
                force_coeffs,
                out,
            },
        ),
        Command::Construct { n, k, expand } => commands::construct(&cfg, &n, k, expand),
        Command::Constant { terms, bits } => {
            if let Some(b) = bits {
                cfg.mantissa_bits = b;
            }
            commands::constant(&cfg, terms)
        }
        Command::Verify { q, r, expand } => commands::verify(&cfg, &q, &r, expand),
        Command::Search {
            k,
            m_cap,
            expand_cap,
            jobs,
            top,
        } => commands::search(&cfg, k, m_cap, expand_cap, top, jobs),
        Command::OracleCheck { m_cap, k_max } => commands::oracle_check(&cfg, m_cap, k_max),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let format = RunConfig::from(&cli.global).output_format;
    match run(cli) {
        Ok(outcome) => {
            print!("{}", output::render(&outcome.report, format));
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
