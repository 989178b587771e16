use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod cli;

#[derive(Parser)]
#[command(name = "hmvol", version, about = "Volume bounds and bigness criteria for Hermitian lattices")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Working precision of certified enclosures, in bits.
    #[arg(long, global = true, default_value_t = 200)]
    pub precision_bits: u32,
    /// Which primes enter theta: all primes dividing D*det(L), or only the common ones.
    #[arg(long, global = true, value_enum, default_value_t = Reading::Union)]
    pub theta_reading: Reading,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Union,
    Intersection,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
pub enum Command {
    /// Invariants, local profiles and the principality check of a lattice file.
    Analyze { path: String },
    /// V(L,F) bound, right-hand side, W and the bigness verdict.
    Bound(BoundArgs),
    /// Threshold scans in m, n and D0.
    Thresholds(ThresholdArgs),
    /// Reflective type and complement of a vector.
    Classify {
        path: String,
        /// Coordinates as `a+b*w` entries separated by commas.
        #[arg(long)]
        vector: String,
    },
}

#[derive(Args)]
pub struct BoundArgs {
    /// Lattice file; alternatively use --params.
    pub path: Option<String>,
    /// Explicit parameters, e.g. `class=generic,n=199,theta=1,dl=1,disc=7`.
    #[arg(long, conflicts_with = "path")]
    pub params: Option<String>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: u64,
    /// `alpha` in `P(alpha)`, as `p` or `p/q`.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Use the unramified square-free bound.
    #[arg(long)]
    pub sharp: bool,
}

#[derive(Args)]
pub struct ThresholdArgs {
    /// Restrict to one field class.
    #[arg(long)]
    pub class: Option<String>,
    /// Restrict to one parity (`odd` for n = 2m, `even` for n = 2m - 1).
    #[arg(long)]
    pub parity: Option<String>,
    /// Largest m scanned.
    #[arg(long, default_value_t = 2500)]
    pub cap: u64,
    /// Largest n scanned by the n-threshold searches.
    #[arg(long, default_value_t = 5000)]
    pub n_cap: u64,
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match cli::run(&args) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", out.text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
