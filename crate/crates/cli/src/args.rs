use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "andre",
    version,
    about = "Exhaustive verification of hyper-regulus counts in PG(5,q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check for one q and report pass/fail per check.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest q for which type-B traces are matched against the covers.
        #[arg(long, default_value_t = 3)]
        trace_max_q: u32,
    },
    /// Classify every plane of PG(5,q) against the regular spread.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        trace_max_q: u32,
    },
    /// Enumerate the covers of CG(3,q).
    Covers {
        #[command(flatten)]
        common: Common,
        /// Include every cover's point labels in the output.
        #[arg(long)]
        list: bool,
    },
    /// Find every plane meeting each plane of a hyper-regulus in a point.
    Transversals {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["1", "2"])]
        kind: String,
        #[arg(long)]
        a: u32,
        /// Second pole, type 2 only.
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        f: u32,
        /// Cross-check against a sweep over all planes.
        #[arg(long)]
        brute: bool,
    },
    /// Build the explicit switching sets of a type-1 hyper-regulus.
    Switching {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        f: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Order of the base field, a prime power.
    #[arg(long)]
    pub q: u32,
    /// Worker threads for the parallel sweeps.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Number of covers to sample where an exhaustive pass is too expensive.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub sample: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Monic modulus of GF(q) over GF(p), coefficients low degree first,
    /// comma separated.
    #[arg(long, value_delimiter = ',')]
    pub base_modulus: Option<Vec<u8>>,
    /// Monic cubic over GF(q) defining GF(q³), coefficients low degree
    /// first, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cubic_modulus: Option<Vec<u8>>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Verify { common, .. }
            | Command::Census { common, .. }
            | Command::Covers { common, .. }
            | Command::Transversals { common, .. }
            | Command::Switching { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Census { .. } => "census",
            Command::Covers { .. } => "covers",
            Command::Transversals { .. } => "transversals",
            Command::Switching { .. } => "switching",
        }
    }
}
