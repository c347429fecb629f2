//! `koszulkit`: graded dimensions, Koszul duals and degree-bounded Koszul
//! complex certificates for homogeneous algebras.
//!
//! Exit codes: 0 success, 1 a check or certificate failed, 2 bad input or
//! an exceeded resource bound.

mod render;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use koszulkit::algebra::DEFAULT_MAX_AMBIENT;
use koszulkit::exactlin::FieldStrategy;

#[derive(Parser)]
#[command(name = "koszulkit", version, about = "Exact computations for N-homogeneous algebras")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Graded dimensions dim A_n.
    Dims(Common),
    /// Graded dimensions of the Koszul dual A^!.
    DualDims(Common),
    /// Poincaré series, the Koszul polynomial Q and the identity P·Q = 1.
    Series(Common),
    /// Graded Lie algebra dimensions N_j from the Poincaré series.
    LieDims(LieArgs),
    /// Acyclicity of the Koszul complex in positive degrees.
    Koszul(Common),
    /// Cohomology of the dual of the Koszul complex.
    Gorenstein(Common),
    /// d^N = 0 on the Koszul N-complex, and the contraction maps.
    Dnzero(Common),
    /// Alternating rank sums of the Koszul complex against graded dimensions.
    Euler(Common),
    /// Dual relations and closed-form relation identities of a preset.
    Dualcheck(Common),
    /// Whether matrices satisfy the relations.
    Repcheck(RepArgs),
    /// Every certificate and check for one input.
    Report(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Modular,
    Exact,
    Verify,
}

impl From<FieldArg> for FieldStrategy {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Modular => FieldStrategy::Modular,
            FieldArg::Exact => FieldStrategy::Exact,
            FieldArg::Verify => FieldStrategy::Verify,
        }
    }
}

#[derive(Args, Clone, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "file"])))]
pub struct Common {
    /// ym, sd+, sd-, heisenberg, free:<g>, poly:<g>, dual-numbers
    #[arg(long)]
    pub preset: Option<String>,
    /// Presentation JSON file
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Metric for ym: euclid<n>, minkowski<n> or diag:a,b,...
    #[arg(long)]
    pub metric: Option<String>,
    /// Highest degree computed (default 10 for up to two generators, else 8 or the resource bound)
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = FieldArg::Modular)]
    pub field: FieldArg,
    /// Seed for the random primes and random matrices
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest ambient tensor dimension g^n allowed
    #[arg(long, default_value_t = DEFAULT_MAX_AMBIENT)]
    pub max_ambient: usize,
    /// Include wall-clock timing (makes output run-dependent)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Clone, Debug)]
pub struct LieArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 10)]
    pub jmax: usize,
}

#[derive(Args, Clone, Debug)]
pub struct RepArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON file {"matrices": [[[entry, ...], ...], ...]} with "p/q" entries
    #[arg(long)]
    pub rep: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let started = Instant::now();
    let (common, request) = match &cli.verb {
        Verb::Dims(c) => (c, run::Request::Dims),
        Verb::DualDims(c) => (c, run::Request::DualDims),
        Verb::Series(c) => (c, run::Request::Series),
        Verb::LieDims(a) => (&a.common, run::Request::LieDims { jmax: a.jmax }),
        Verb::Koszul(c) => (c, run::Request::Koszul),
        Verb::Gorenstein(c) => (c, run::Request::Gorenstein),
        Verb::Dnzero(c) => (c, run::Request::DnZero),
        Verb::Euler(c) => (c, run::Request::Euler),
        Verb::Dualcheck(c) => (c, run::Request::DualCheck),
        Verb::Repcheck(a) => (&a.common, run::Request::RepCheck { rep: a.rep.clone() }),
        Verb::Report(c) => (c, run::Request::Report),
    };
    let outcome = run::load(common).and_then(|src| {
        let out = run::execute(&src, common, &request)?;
        Ok((src, out))
    });
    match outcome {
        Ok((src, out)) => {
            let elapsed = common.timing.then(|| started.elapsed());
            let report = render::report(&src, common, &request, &out, elapsed);
            let text = match common.format {
                Format::Json => render::json(&report),
                Format::Csv => render::csv(&report),
                Format::Text => render::text(&report),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
