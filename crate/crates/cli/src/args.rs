use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divcorr::correlate::Mode;
use divcorr::selftest::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "divcorr", version, about = "Shifted divisor correlations and the identities behind their main terms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Both sides of Voronoi summation for every b mod c
    VerifyVoronoi {
        /// Moduli to check
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3, 4, 6, 12])]
        moduli: Vec<u64>,
    },
    /// Table of S(m, n; c)
    Kloosterman {
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 10)]
        mmax: i64,
        #[arg(long, default_value_t = 10)]
        nmax: i64,
    },
    /// Table of c_q(n)
    Ramanujan {
        #[arg(long, default_value_t = 12)]
        qmax: u64,
        #[arg(long, default_value_t = 12)]
        nmax: i64,
    },
    /// Ŝ_v(χ; n) for every character mod v
    Shat {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
    },
    /// The constant C, the polynomial P and the main terms at --x
    MainTerm,
    /// Residual scan of brute force against main term, with exponent fit
    Correlate,
    /// Smooth splitting of d(n) checked on sampled n ≤ --x
    SplitCheck {
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Fast run of every invariant suite
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Smooth,
    Sharp,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Smooth => Mode::Smooth,
            ModeArg::Sharp => Mode::Sharp,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true)]
    pub r1: Option<u64>,
    #[arg(long, global = true)]
    pub r2: Option<u64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub f1: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub f2: Option<i64>,
    #[arg(long, global = true)]
    pub x: Option<u64>,
    #[arg(long, global = true)]
    pub kmin: Option<u32>,
    #[arg(long, global = true)]
    pub kmax: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub out: Option<Format>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long = "geometric-step", global = true)]
    pub geometric_step: Option<f64>,
}
