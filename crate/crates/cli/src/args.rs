use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degcorr::experiments::Model;
use degcorr::MeasureKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "degcorr", version, about = "Degree-degree correlations in configuration models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print nu2/nu1 and the ANNR limit E[F*(D*)] for each gamma.
    Limits(LimitsArgs),
    /// Sample one graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Compute ANND or ANNR curves of an edge-list file.
    Measure(MeasureArgs),
    /// Average curves over replica graphs.
    Ensemble(EnsembleArgs),
    /// Presence of small degrees in i.i.d. degree sequences.
    Presence(PresenceArgs),
    /// Rescaled ANND samples and their tail index for 1 < gamma < 2.
    Clt(CltArgs),
    /// ANND/ANNR differences between a CM graph and its erasure.
    Gap(GapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Cm,
    Ecm,
    Rcm,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cm => Model::Cm,
            ModelArg::Ecm => Model::Ecm,
            ModelArg::Rcm => Model::Rcm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Annd,
    Annr,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Annd => MeasureKind::Annd,
            MeasureArg::Annr => MeasureKind::Annr,
        }
    }
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Tail exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.5, 1.8, 2.0, 2.2, 2.5])]
    pub gamma: Vec<f64>,
    /// Absolute tolerance on the ANNR limit.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Largest number of series terms before giving up on `--tol`.
    #[arg(long, default_value_t = degcorr::distributions::DEFAULT_LIMIT_TERMS_CAP)]
    pub max_terms: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of nodes (ignored with --degrees-file).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModelArg::Cm)]
    pub model: ModelArg,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use this degree sequence (one degree per line) instead of sampling one.
    #[arg(long)]
    pub degrees_file: Option<PathBuf>,
    /// Pairing attempts allowed for the repeated model.
    #[arg(long, default_value_t = degcorr::graphs::DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Edge-list file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MeasureArg::Annd)]
    pub measure: MeasureArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Options shared by the experiment subcommands.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with any of the flags below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip)]
    pub model: Option<ModelArg>,
    #[arg(long, value_enum, value_delimiter = ',')]
    #[serde(skip)]
    pub measures: Vec<MeasureArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_attempts: Option<u32>,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PresenceArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Graph sizes, comma separated.
    #[arg(long = "n", value_delimiter = ',')]
    #[serde(rename = "ns", skip_serializing_if = "Vec::is_empty")]
    pub ns: Vec<usize>,
    /// Exponents a in (0, 1), comma separated; degree ceil(n^a) is probed.
    #[arg(long = "a", value_delimiter = ',')]
    #[serde(rename = "exponents", skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CltArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
}
