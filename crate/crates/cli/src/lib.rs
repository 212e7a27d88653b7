//! Command-line front end for `delpezzo`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the process exit code together with the rendered output, so the binary
//! is a thin wrapper and tests can drive the CLI in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub mod cache;
mod commands;
mod render;

pub const CACHE_ENV: &str = "DELPEZZO_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "delpezzo", version, about = "Computations on del Pezzo surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached series expansions (overrides $DELPEZZO_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceArgs {
    /// Surface token: P2, P1xP1 or S1..S8.
    #[arg(long)]
    pub surface: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassArgs {
    #[arg(long)]
    pub surface: String,
    /// Divisor class as comma-separated coordinates, e.g. `5,-2`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CodimArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "beta_range", conflicts_with = "beta_range")]
    pub beta: Option<String>,
    /// Inclusive ranges per coordinate, e.g. `1..6,1..6`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta_range: Option<String>,
    /// Include the decomposition achieving the codimension.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckAArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub i: u32,
    /// Use the relaxed very-ampleness clause.
    #[arg(long)]
    pub relaxed: bool,
    /// Also test very ampleness on this many sampled subschemes (slow).
    #[arg(long)]
    pub verify_samples: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MinNArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub i: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct BettiArgs {
    #[arg(long)]
    pub surface: String,
    /// Number of points.
    #[arg(long)]
    pub m: u32,
    /// A single degree instead of the full table.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct StableBettiArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long)]
    pub max_k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ModuliBettiArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub chi: i64,
    #[arg(long, required_unless_present = "k_range", conflicts_with = "k_range")]
    pub k: Option<u32>,
    /// Inclusive range of degrees, e.g. `0..8`.
    #[arg(long)]
    pub k_range: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct JacArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct BpsArgs {
    /// Largest total degree i+j.
    #[arg(long)]
    pub max_total: u32,
    /// Curve degree d; marks entries beyond i+j = 2d−4.
    #[arg(long)]
    pub d: Option<i64>,
}

#[derive(Debug, Args, Serialize)]
pub struct TautArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct GapArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub chi_o: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub k2: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Picard lattice, canonical class and curve counts.
    Surface(SurfaceArgs),
    /// Riemann–Roch: χ, p_a and dim|β|.
    Rr(ClassArgs),
    /// Arithmetic genus of β.
    Genus(ClassArgs),
    /// The (−1)-curves.
    Lines {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// List the classes, not just the count.
        #[arg(long)]
        list: bool,
    },
    /// Codimension of the non-integral locus in |β|.
    Codim(CodimArgs),
    /// Check condition (A_i).
    CheckA(CheckAArgs),
    /// Check condition (P).
    CheckP(ClassArgs),
    /// Least n with n·β satisfying (A_i).
    MinN(MinNArgs),
    /// Betti numbers of the Hilbert scheme of m points.
    Betti(BettiArgs),
    /// Stable Betti numbers.
    StableBetti(StableBettiArgs),
    /// Intersection Betti numbers of M_{β,χ}.
    ModuliBetti(ModuliBettiArgs),
    /// Dimension of M_β.
    ModuliDim(ClassArgs),
    /// Degree of the compactified Jacobian component.
    JacDegree(JacArgs),
    /// Certified lower bound ρ(M_β) ≥ ρ(S) + 1.
    PicardBound(ClassArgs),
    /// Refined BPS numbers of local P².
    Bps(BpsArgs),
    /// Number of tautological monomials of degree k.
    TautCount(TautArgs),
    /// Dimension gap for surfaces of general type.
    Gap(GapArgs),
}

/// Echo of the parsed command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub subcommand: String,
    pub format: Format,
    pub args: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub query: Query,
    #[serde(flatten)]
    pub result: Map<String, Value>,
    pub certified: BTreeMap<String, bool>,
    pub warnings: Vec<String>,
}

/// Failure classes, mapped to exit codes 1 and 2.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<delpezzo::Error> for CliError {
    fn from(e: delpezzo::Error) -> Self {
        use delpezzo::Error as E;
        match e {
            E::Invariant(_) | E::Series(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns `(exit code, output)`.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return (code, e.render().to_string());
        }
    };
    match execute(&cli) {
        Ok(envelope) => match render::render(&envelope, cli.format) {
            Ok(out) => (0, out),
            Err(e) => (e.exit_code(), format!("error: {}\n", message(&e))),
        },
        Err(e) => (e.exit_code(), format!("error: {}\n", message(&e))),
    }
}

fn message(e: &CliError) -> &str {
    match e {
        CliError::Input(m) | CliError::Internal(m) => m,
    }
}

/// Runs the parsed command and wraps the result in an envelope.
pub fn execute(cli: &Cli) -> Result<ResultEnvelope, CliError> {
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let cache = cache::SeriesCache::new(cache_dir);
    let (name, args) = commands::describe(&cli.command);
    let outcome = commands::dispatch(&cli.command, &cache)?;
    let result = match outcome.result {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    };
    for reserved in ["query", "certified", "warnings"] {
        if result.contains_key(reserved) {
            return Err(CliError::Internal(format!("result field `{reserved}` collides with the envelope")));
        }
    }
    Ok(ResultEnvelope {
        query: Query { subcommand: name.to_string(), format: cli.format, args },
        result,
        certified: outcome.certified,
        warnings: outcome.warnings,
    })
}
