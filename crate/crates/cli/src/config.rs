use std::io::IsTerminal;

use clap::builder::TypedValueParser;
use clap::{Args, ValueEnum};
use iepoly::factors::DEFAULT_SUBSET_CAP;
use iepoly::oracle::DEFAULT_ORACLE_CAP;
use iepoly::poly::DEFAULT_MEMORY_CAP;
use iepoly::real::DEFAULT_MANTISSA_BITS;
use iepoly::ExpandOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Options shared by every subcommand. Each flag falls back to an `IEPOLY_*`
/// environment variable; an explicit flag wins.
#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Largest coefficient vector an expansion may allocate.
    #[arg(long, global = true, env = "IEPOLY_MEMORY_CAP", default_value_t = DEFAULT_MEMORY_CAP,
          value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub memory_cap: usize,

    /// Largest m accepted by the brute-force oracle.
    #[arg(long, global = true, env = "IEPOLY_ORACLE_CAP", default_value_t = DEFAULT_ORACLE_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_cap: u64,

    /// Largest tuple size whose 2^k divisor subsets are enumerated.
    #[arg(long, global = true, env = "IEPOLY_SUBSET_CAP", default_value_t = DEFAULT_SUBSET_CAP,
          value_parser = clap::value_parser!(u64).range(1..=63).map(|v| v as usize))]
    pub subset_cap: usize,

    /// Working mantissa of the high-precision reals (at least 64).
    #[arg(long, global = true, env = "IEPOLY_MANTISSA_BITS", default_value_t = DEFAULT_MANTISSA_BITS,
          value_parser = clap::value_parser!(u64).range(64..=65536).map(|v| v as usize))]
    pub mantissa_bits: usize,

    /// Output format; json when stdout is not a terminal, text otherwise.
    #[arg(long, global = true, env = "IEPOLY_FORMAT", value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub memory_cap_coeffs: usize,
    pub oracle_cap_m: u64,
    pub subset_cap_k: usize,
    pub mantissa_bits: usize,
    pub output_format: OutputFormat,
}

impl From<&GlobalArgs> for RunConfig {
    fn from(g: &GlobalArgs) -> Self {
        let output_format = g.format.unwrap_or_else(|| {
            if std::io::stdout().is_terminal() {
                OutputFormat::Text
            } else {
                OutputFormat::Json
            }
        });
        RunConfig {
            memory_cap_coeffs: g.memory_cap,
            oracle_cap_m: g.oracle_cap,
            subset_cap_k: g.subset_cap,
            mantissa_bits: g.mantissa_bits,
            output_format,
        }
    }
}

impl RunConfig {
    pub fn expand_options(&self, half_degree: bool) -> ExpandOptions {
        ExpandOptions {
            memory_cap: self.memory_cap_coeffs,
            subset_cap: self.subset_cap_k,
            half_degree,
            ..Default::default()
        }
    }
}
