//! Command-line definitions.

use crate::output::Format;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(
    name = "doubling",
    version,
    about = "Multifractal analysis of the doubling map with the potential log|cos pi(x + c)|",
    after_help = "Output goes to --output, else to $DOUBLING_OUTPUT_DIR/<command>.<csv|json>, \
                  else to standard output. Exit status: 0 success, 1 domain or i/o error, 2 usage error."
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Output file, written atomically.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Bit width for `--c random` and `--x random`.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1_000_000))]
    pub width: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

/// The parameter `c` in `[0, 1)`: `p/q`, an exact decimal, or `random`.
#[derive(Debug, Args)]
pub struct CArg {
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extremes of periodic-orbit averages up to a maximal period.
    #[command(after_help = "CSV columns: c,max_period,period,word,average,is_singular,is_argmin,is_argmax")]
    Extremes {
        #[command(flatten)]
        c: CArg,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=24))]
        max_period: u32,
    },

    /// Lower bound 1 + beta/log 2 for the Gelfond exponent.
    #[command(after_help = "CSV columns: c,max_period,beta,gelfond_exponent,argmax_word,argmax_period,within_semicircle")]
    Gelfond {
        #[command(flatten)]
        c: CArg,
        #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u32).range(1..=24))]
        max_period: u32,
    },

    /// Close returns of b = 1/2 - c to itself and the estimate of m*.
    #[command(after_help = "CSV columns: c,n,q,partial_avg")]
    Mcstar {
        #[command(flatten)]
        c: CArg,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
        horizon: u64,
    },

    /// Binding period of a radius rho, and optionally the free return of x.
    #[command(after_help = "CSV columns: c,rho,p,k0,rho0,lower_bound,bound_applies,bound_holds,bind2_holds,free_return_time,free_return_log2_average")]
    Binding {
        #[command(flatten)]
        c: CArg,
        /// Radius as p/q or an exact decimal.
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 4.0)]
        k0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
        horizon: u64,
    },

    /// Seeded Monte Carlo estimate of the self-return average.
    #[command(after_help = "CSV columns: sample,average")]
    Montecarlo {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
        samples: u64,
        #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
        horizon: u64,
    },

    /// L1 modulus of continuity of log|sin pi x| at delta = 2^-k.
    #[command(after_help = "CSV columns: k,delta,omega1,ratio")]
    Modulus {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(3..=40))]
        k_min: u32,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(3..=40))]
        k_max: u32,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=200))]
        quad_points: u64,
    },

    /// Covariances of log|sin pi (2^j - 1) x| and log|sin pi (2^k - 1) x|.
    #[command(after_help = "CSV columns: j,k,covariance")]
    Covariance {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=14))]
        j: u32,
        /// Comma-separated exponents k.
        #[arg(long, default_value = "3,4,5,6,7,8,9,10")]
        k: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=200))]
        quad_points: u64,
    },

    /// Pressure bracket on a Markov subsystem avoiding B(b, delta).
    #[command(after_help = "CSV columns: t,pLower,pUpper\nt-grid: \"standard\", \"a:b:step\" or a comma-separated list.")]
    Pressure {
        #[command(flatten)]
        c: CArg,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=20))]
        level: u32,
        #[arg(long, default_value = "standard", allow_hyphen_values = true)]
        t_grid: String,
    },

    /// Dimension spectrum D(alpha) along a schedule of shrinking delta.
    #[command(after_help = "CSV columns: alpha,dLower,dUpper,converged")]
    Spectrum {
        #[command(flatten)]
        c: CArg,
        /// "a:b:step" or a comma-separated list.
        #[arg(long, allow_hyphen_values = true)]
        alpha_grid: String,
        #[arg(long, default_value = "1/16,1/64,1/256")]
        delta_schedule: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=20))]
        level: u32,
    },

    /// Exact certificates for the self-return covers and the index count.
    #[command(after_help = "CSV columns: check,params,computed,bound,pass")]
    CoverCheck {
        /// Certify every 1 <= i, j with i + j at most this.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(2..=22))]
        max_sum: u32,
        /// Indices i_1 < ... < i_k of a multiple cover (needs --multi-j).
        #[arg(long, requires = "multi_j")]
        multi_i: Option<String>,
        #[arg(long, requires = "multi_i")]
        multi_j: Option<String>,
        /// Count index tuples for n up to this (0 skips).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=28))]
        fnm_max_n: u32,
        #[arg(long, default_value = "1/4")]
        fnm_epsilon: String,
    },

    /// Cross-module oracle suite with a pass/fail table.
    #[command(after_help = "CSV columns: check,pass,detail")]
    Validate,

    /// Direct sum against the product formula for sigma_N(x), N = 2^n.
    #[command(after_help = "CSV columns: c,x,n,direct_re,direct_im,direct_abs,modulus,relative_difference")]
    Polynomial {
        #[command(flatten)]
        c: CArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=24))]
        n: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Extremes { .. } => "extremes",
            Command::Gelfond { .. } => "gelfond",
            Command::Mcstar { .. } => "mcstar",
            Command::Binding { .. } => "binding",
            Command::Montecarlo { .. } => "montecarlo",
            Command::Modulus { .. } => "modulus",
            Command::Covariance { .. } => "covariance",
            Command::Pressure { .. } => "pressure",
            Command::Spectrum { .. } => "spectrum",
            Command::CoverCheck { .. } => "cover-check",
            Command::Validate => "validate",
            Command::Polynomial { .. } => "polynomial",
        }
    }
}
