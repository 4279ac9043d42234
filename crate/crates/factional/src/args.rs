//! Command-line surface. Every option can also come from the `--config` JSON
//! file under the same snake_case key; explicit flags win.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factional_core::rational::{format_rational, parse_rational};
use factional_core::Q;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::table::Format;

/// Exact rational accepted as `a/b`, an integer or a terminating decimal.
#[derive(Debug, Clone, PartialEq)]
pub struct Rat(pub Q);

impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rat).map_err(|e| e.to_string())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected a rational, found {other}"))),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A file path on the command line; in a config file, also an inline value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Path(String),
    Inline(Value),
}

impl FromStr for Source {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(Source::Path(s.to_string()))
    }
}

#[derive(Debug, Parser)]
#[command(name = "factional", version, about = "Revolt games on networks: equilibria, bounds and experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct GlobalArgs {
    /// JSON file whose keys provide defaults for any option.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Master seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and trials (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest (or smallest) revolt supported in each state.
    Analyze(AnalyzeArgs),
    /// Decide a promise instance, or map outcomes over a μ* grid.
    Promise(PromiseArgs),
    /// Mean revolt sizes over generated graphs while one parameter varies.
    Sweep(SweepArgs),
    /// Monte-Carlo concentration of candidate counts on a concrete graph.
    Validate(ValidateArgs),
    /// Exact equilibria of a small graph by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Common (p, μ)-belief on a finite epistemic model.
    Epistemic(EpistemicArgs),
    /// Generate a degree sequence or graph.
    Gen(GenArgs),
    /// Evaluate the probability bounds for an instance.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PriorInput {
    /// Prior JSON file.
    #[arg(long)]
    pub prior: Option<Source>,
    /// Override the prior's p.
    #[arg(long)]
    pub p: Option<Rat>,
    /// Override the prior's μ.
    #[arg(long)]
    pub mu: Option<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Constant,
    Powerlaw,
    Ba,
    Er,
    Torus,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphInput {
    /// Degree-sequence file (`d` or `count x d` per line).
    #[arg(long)]
    pub degrees: Option<Source>,
    /// Edge-list file (`u v` per line, optional `# n=N`).
    #[arg(long)]
    pub graph: Option<Source>,
    /// Generate instead of reading.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Number of vertices for generated inputs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Family parameter: d, γ, m or edge probability.
    #[arg(long)]
    pub param: Option<Rat>,
    /// Torus rows and columns.
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// Treat agents of degree ≥ ⌈c·n^{1/3}⌉ as learning the state.
    #[arg(long)]
    pub general: bool,
    /// The constant c for --general (default 1).
    #[arg(long)]
    pub cutoff_c: Option<Rat>,
    /// High-degree agents are ignored below this fraction (default 0).
    #[arg(long)]
    pub epsilon: Option<Rat>,
    /// Any number of states, by iterated removal.
    #[arg(long)]
    pub multistate: bool,
    /// Remove one failing state per round instead of all.
    #[arg(long)]
    pub one_at_a_time: bool,
    /// Smallest supported revolt instead of the largest.
    #[arg(long)]
    pub smallest: bool,
    /// Swap the two states when they are mislabeled.
    #[arg(long)]
    pub auto_relabel: bool,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PromiseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// Single μ*.
    #[arg(long)]
    pub mu_star: Option<Rat>,
    /// Grid of μ* values: first, last and step.
    #[arg(long)]
    pub mu_star_from: Option<Rat>,
    #[arg(long)]
    pub mu_star_to: Option<Rat>,
    #[arg(long)]
    pub mu_star_step: Option<Rat>,
    /// Promise gap in μ (default 1/200).
    #[arg(long)]
    pub epsilon: Option<Rat>,
    /// Promise gap in p (default 1/200).
    #[arg(long)]
    pub delta: Option<Rat>,
    /// Exit with status 4 if any outcome is Null.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub auto_relabel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// The generator parameter (d, γ, m, edge probability).
    Param,
    P,
    Mu,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub from: Option<Rat>,
    #[arg(long)]
    pub to: Option<Rat>,
    #[arg(long)]
    pub step: Option<Rat>,
    /// Generator parameter when sweeping p or μ.
    #[arg(long)]
    pub param: Option<Rat>,
    /// Vertices per graph (default 1000).
    #[arg(long)]
    pub n: Option<usize>,
    /// Graphs per value for random families (default 100).
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// State the types are drawn from (default: the first).
    #[arg(long)]
    pub state: Option<String>,
    /// Number of sampled assignments (default 200).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Failure probability defining the deviation envelope (default 1/1000).
    #[arg(long)]
    pub envelope_delta: Option<Rat>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// Build the clique-reduction instance for cliques of size k.
    #[arg(long)]
    pub clique_reduce: Option<usize>,
    /// Revolt size asked about (default μ).
    #[arg(long)]
    pub mu_star: Option<Rat>,
    /// Probability the revolt must reach (default 1/2).
    #[arg(long)]
    pub q_star: Option<Rat>,
    /// Limit on states × 3^n (default 118098).
    #[arg(long)]
    pub budget: Option<u128>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct EpistemicArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: Option<Source>,
    #[arg(long)]
    pub p: Option<Rat>,
    #[arg(long)]
    pub mu: Option<Rat>,
    /// Event F as comma-separated outcomes.
    #[arg(long)]
    pub event: Option<String>,
    /// Report a single outcome only.
    #[arg(long)]
    pub omega: Option<String>,
    /// Compare fixpoint, search and coalition forms on random models.
    #[arg(long)]
    pub verify_prop1: bool,
    /// Random models for --verify-prop1 (default 1000).
    #[arg(long)]
    pub models: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenOutput {
    Degrees,
    Edges,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// What to write (default: degrees for sequence families, edges otherwise).
    #[arg(long, value_enum)]
    pub emit: Option<GenOutput>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub prior: PriorInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    /// Relative deviation for the Chernoff rows (default 1/10).
    #[arg(long)]
    pub epsilon: Option<Rat>,
    /// High-degree detection accuracy ε₀; needs --cutoff-c.
    #[arg(long)]
    pub epsilon0: Option<Rat>,
    #[arg(long)]
    pub cutoff_c: Option<Rat>,
}
