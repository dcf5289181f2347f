//! `rigidity-lab`: drives the `rigidity-core` checks from the command line and
//! writes deterministic JSON, CSV or text reports.

pub mod exclude;
pub mod graph;
pub mod manifest;
pub mod rank;
pub mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA: &str = "rigidity-lab/1";

#[derive(Debug, Parser)]
#[command(
    name = "rigidity-lab",
    version,
    about = "Exact checks of codimension counts and of the supermaximal exclusion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Base seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; the report does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON parameters or input document for the subcommand.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact ranks of singularity-condition systems against their formulas.
    RankCheck,
    /// Closed-form codimension bounds over a parameter grid.
    CodimSweep,
    /// Validate a resolution graph and report its path data, or run the random graph suite.
    GraphCheck,
    /// Exclusion verdicts for an instance, a pigeonhole input or a random suite.
    Exclude,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RankCheck => "rank-check",
            Command::CodimSweep => "codim-sweep",
            Command::GraphCheck => "graph-check",
            Command::Exclude => "exclude",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("schema error in {source_name}: {detail}")]
    Schema { source_name: String, detail: String },
    #[error("refusing to run: {0}")]
    ResourceCap(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// A finished run: the rendered report and how many violations were not
/// covered by the expected-failure manifest.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub unexpected: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.unexpected > 0 {
            1
        } else {
            0
        }
    }
}

/// The report envelope shared by every subcommand.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, B: Serialize> {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: &'a C,
    #[serde(flatten)]
    pub body: B,
}

pub fn envelope<'a, C: Serialize, B: Serialize>(
    command: &'static str,
    seed: Option<u64>,
    config: &'a C,
    body: B,
) -> Envelope<'a, C, B> {
    Envelope {
        schema: SCHEMA,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
        body,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Renders rows through the `csv` writer with a fixed header.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

/// SplitMix64 finalizer; derives independent per-task seeds from the base seed.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for task `parts` under `base`, independent of task order.
pub fn task_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ p))
}

pub fn require_seed(common: &CommonArgs, what: &str) -> Result<u64, CliError> {
    common
        .seed
        .ok_or_else(|| CliError::Config(format!("{what} is randomized and needs --seed")))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses JSON, naming the offending field path on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Schema {
            source_name: source_name.to_string(),
            detail: if path == "." {
                inner.to_string()
            } else {
                format!("at {path}: {inner}")
            },
        }
    })
}

/// Reads `--params` into `T`, or returns `T::default()` when absent.
pub fn load_params<T: DeserializeOwned + Default>(common: &CommonArgs) -> Result<T, CliError> {
    match &common.params {
        Some(path) => parse_json(&read_text(path)?, &path.display().to_string()),
        None => Ok(T::default()),
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// Runs one subcommand inside a pool of `--jobs` workers.
pub fn run(command: &Command, common: &CommonArgs) -> Result<Outcome, CliError> {
    let pool = pool(common.jobs)?;
    pool.install(|| match command {
        Command::RankCheck => rank::run(common),
        Command::CodimSweep => sweep::run(common),
        Command::GraphCheck => graph::run(common),
        Command::Exclude => exclude::run(common),
    })
}

pub fn write_report(common: &CommonArgs, report: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, report).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(report.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_seeds_differ_and_repeat() {
        let a = task_seed(1, &[3, 4]);
        assert_eq!(a, task_seed(1, &[3, 4]));
        assert_ne!(a, task_seed(1, &[4, 3]));
        assert_ne!(a, task_seed(2, &[3, 4]));
    }

    #[test]
    fn csv_header_first() {
        let s = to_csv(&["a", "b"], vec![vec!["1".into(), "x,y".into()]]);
        assert_eq!(s, "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn schema_errors_name_the_field() {
        #[derive(Debug, serde::Deserialize)]
        #[allow(dead_code)]
        struct Inner {
            weight: u8,
        }
        #[derive(Debug, serde::Deserialize)]
        #[allow(dead_code)]
        struct Outer {
            edges: Vec<Inner>,
        }
        let err =
            parse_json::<Outer>(r#"{"edges":[{"weight":1},{"weight":"x"}]}"#, "input").unwrap_err();
        assert!(err.to_string().contains("edges[1].weight"), "{err}");
    }
}
