use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed_2a0e;

#[derive(Debug, Parser)]
#[command(name = "zlab", version, about = "Bounded continued fractions and SL2(F_p) experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for every randomized set construction.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Append results to this JSONL cache.
    #[arg(long, global = true, env = "ZLAB_CACHE")]
    pub cache: Option<PathBuf>,

    /// Replay the newest matching cache record instead of recomputing.
    #[arg(long, global = true)]
    pub from_cache: bool,

    /// Recompute and compare against the newest matching cache record.
    #[arg(long, global = true, conflicts_with = "from_cache")]
    pub verify_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Canonical,
    Twin,
}

impl From<ConventionArg> for zlab_core::Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Canonical => zlab_core::Convention::Canonical,
            ConventionArg::Twin => zlab_core::Convention::Twin,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Continued-fraction expansion and evaluation.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Zaremba sets F_M(Q).
    #[command(subcommand)]
    Zset(ZsetCommand),
    /// Denominators divisible by p with bounded quotients.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Product sets and Borel subgroups in SL2(F_p).
    #[command(subcommand)]
    Sl2(Sl2Command),
    /// Trivial and Steinberg Fourier blocks.
    #[command(subcommand)]
    Rep(RepCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CfCommand {
    /// Canonical expansion of u/v.
    Expand {
        #[arg(long)]
        frac: String,
    },
    /// Value of an expansion such as [0;1,2,2].
    Eval {
        #[arg(long)]
        cf: String,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ZsetParams {
    #[arg(long = "M")]
    pub m: u64,
    #[arg(long = "Q")]
    pub q: u64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Canonical)]
    pub convention: ConventionArg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZsetCommand {
    /// List the members u/v.
    Enum {
        #[command(flatten)]
        params: ZsetParams,
        /// Refuse when the set would have more members.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Count the members without listing them.
    Count {
        #[command(flatten)]
        params: ZsetParams,
    },
    /// Fit the growth exponent over Q = 2^lo .. 2^hi.
    Dim {
        #[arg(long = "M")]
        m: u64,
        #[arg(long, default_value_t = 4)]
        lo: u32,
        #[arg(long, default_value_t = 14)]
        hi: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Canonical)]
        convention: ConventionArg,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchCommand {
    /// Smallest q = 0 mod p with some a/q bounded by M.
    Minq {
        #[arg(long)]
        p: u64,
        #[arg(long = "M", default_value_t = 2)]
        m: u64,
        /// Largest denominator explored; defaults to p^4.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Run minq for many primes.
    Table {
        /// All primes up to this bound.
        #[arg(long, conflicts_with = "primes")]
        p_max: Option<u64>,
        /// Explicit comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long = "M", default_value_t = 2)]
        m: u64,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Smallest n with A^n meeting the standard Borel.
    Power {
        #[arg(long)]
        p: u64,
        #[arg(long = "M", default_value_t = 2)]
        m: u64,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
    },
    /// Evaluate the two lower bounds on n.
    Bounds {
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        /// Defaults to the positive root of 18a^2 + 19a - 20.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetSource {
    /// Even-length matrices of F_M(Q) mod p.
    Zaremba,
    /// A uniformly random subset of SL2(F_p).
    Random,
    /// The standard Borel subgroup.
    Borel,
    /// All of SL2(F_p).
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct SetParams {
    #[arg(long, value_enum, default_value_t = SetSource::Zaremba)]
    pub source: SetSource,
    #[arg(long = "M", default_value_t = 2)]
    pub m: u64,
    /// Denominator bound for the Zaremba source; defaults to p - 1.
    #[arg(long = "Q")]
    pub q: Option<u64>,
    /// Size of a random set.
    #[arg(long, default_value_t = 50)]
    pub size: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sl2Command {
    /// Check r_BgB <= p - 1 and BgB = G \ B for every g outside B.
    VerifyBgb {
        #[arg(long)]
        p: u64,
    },
    /// Common energy of random pairs of sets.
    Energy {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        size_a: usize,
        #[arg(long, default_value_t = 10)]
        size_b: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// |AA| / |A| and |AAA| / |A|.
    Tripling {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        set: SetParams,
    },
    /// Intersections with Borel subgroups and their cosets.
    Borel {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        set: SetParams,
    },
    /// The a -> a g a^-1 fiber inequality for random regular g.
    Helfgott {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// A^n against the standard Borel under the size threshold.
    Threshold {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[command(flatten)]
        set: SetParams,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepCommand {
    /// Exact norms of the Borel indicator's Steinberg block.
    Certify {
        #[arg(long)]
        q: u64,
    },
    /// Sum of squared dimensions of the irreducibles.
    Inventory {
        #[arg(long)]
        q: u64,
    },
    /// Spectral gap and the mixing estimate for A^n.
    Gap {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 700)]
        size: usize,
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Confirm A^n = SL2(F_q) by powering when the estimate is positive.
        #[arg(long)]
        verify_power: bool,
    },
}
