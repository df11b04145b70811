//! Command-line flags. Each subcommand's flag set doubles as its JSON config
//! layout (kebab-case keys), so a config file and the command line merge
//! field by field.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Deserializer, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "nullfield",
    version,
    about = "Null electromagnetic fields and Legendrian fields on S³: verification and tracing"
)]
pub struct Cli {
    /// JSON config (`"schema": 1`); flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a residual suite over seeded samples.
    Verify(VerifyArgs),
    /// Trace a field line on S³ or in R³, or transport a curve.
    Trace(TraceArgs),
    /// Rotation number of a closed Legendrian curve.
    Rotation(RotationArgs),
    /// Linking number of two closed curves in R³.
    Link(LinkArgs),
    /// Monodromy of the normal variational equation or of a closed orbit.
    Monodromy(MonodromyArgs),
    /// Bounded Diophantine check of a frequency.
    Diophantine(DiophantineArgs),
    /// Seifert contact-form identities at seeded points.
    Seifert(SeifertArgs),
    /// Transport two linked E-lines along the Poynting flow and check them.
    TransportCheck(TransportCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Trace(_) => "trace",
            Command::Rotation(_) => "rotation",
            Command::Link(_) => "link",
            Command::Monodromy(_) => "monodromy",
            Command::Diophantine(_) => "diophantine",
            Command::Seifert(_) => "seifert",
            Command::TransportCheck(_) => "transport-check",
        }
    }
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<String>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(Option::<OneOrMany>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    }))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct VerifyArgs {
    /// null | maxwell | bateman-pde | sphere | divergence | seifert | sphere-pushforward | round-trip | tt-link
    #[arg(long)]
    pub suite: Option<String>,
    /// Generator h (repeatable); defaults to the suite's battery.
    #[arg(long)]
    #[serde(deserialize_with = "one_or_many")]
    pub generator: Option<Vec<String>>,
    /// hopf | tilde | both
    #[arg(long)]
    pub variant: Option<String>,
    /// direct | antiholomorphic
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples per case.
    #[arg(long)]
    pub n: Option<usize>,
    /// Times at which fields are sampled.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub times: Option<Vec<f64>>,
    /// Pass threshold; defaults to the suite's.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Per-sample defects as CSV; the report goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct TraceArgs {
    /// legendrian | torus | seifert | electric | magnetic | poynting
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub generator: Option<String>,
    /// e | b (Legendrian fields)
    #[arg(long)]
    pub polarity: Option<String>,
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Start point: four coordinates on S³ or three in R³.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    /// Start on S³ at `(√(1−a), 0, √a, 0)`, i.e. `|z2|² = a`.
    #[arg(long)]
    pub start_a: Option<f64>,
    /// Field time for R³ fields, and the start time of a transport.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Parameter span to trace.
    #[arg(long)]
    pub tau: Option<f64>,
    /// ODE tolerance (relative and absolute).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Stop tracing when `|x|` exceeds this (R³).
    #[arg(long)]
    pub bound: Option<f64>,
    /// Detect the first return and emit one period.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub closure: bool,
    #[arg(long)]
    pub closure_tol: Option<f64>,
    /// Samples of the emitted closed orbit.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Phase windings of z1, z2 along the closed orbit.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub windings: bool,
    /// Rotation number of the closed orbit.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub rotation: bool,
    /// Drift of Re and Im of a potential along the trace: a polynomial, or
    /// `knot:p,q` for `ρ z1^p z2^q − 1`.
    #[arg(long)]
    pub potential: Option<String>,
    /// Linking number of the closed orbit with an R³ curve CSV.
    #[arg(long)]
    pub link_with: Option<PathBuf>,
    /// Closed R³ curve CSV to transport instead of tracing.
    #[arg(long)]
    pub from_curve: Option<PathBuf>,
    /// Transport `--from-curve` along the Poynting flow from `--t` to here.
    #[arg(long, allow_hyphen_values = true)]
    pub transport_to: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Curve CSV; the summary goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct RotationArgs {
    /// Closed S³ curve CSV; tangents by periodic differences.
    #[arg(long)]
    pub from_curve: Option<PathBuf>,
    /// Tangents winding k times against `(v1, v2)` along the tt-unknot.
    #[arg(long, allow_hyphen_values = true)]
    pub synthetic: Option<i64>,
    /// Trace a closed orbit instead: legendrian | torus
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub polarity: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long)]
    pub start_a: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct LinkArgs {
    #[arg(long)]
    pub curve_a: Option<PathBuf>,
    #[arg(long)]
    pub curve_b: Option<PathBuf>,
    /// hopf-pair | split | hopf-fibers | hopfion | torus-knot
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct MonodromyArgs {
    /// NVE with `G ≡ ω²/2 − 1` over unit period.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// NVE with `G = g0 + Σ a_k cos + b_k sin` over `--period`.
    #[arg(long, allow_hyphen_values = true)]
    pub g0: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cos: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sin: Option<Vec<f64>>,
    #[arg(long)]
    pub period: Option<f64>,
    /// Closed orbit instead: legendrian | torus
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub polarity: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long)]
    pub start_a: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Attach a Diophantine check of `ω/2π` with these parameters.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub exponent: Option<f64>,
    #[arg(long)]
    pub q_max: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct DiophantineArgs {
    /// A number, a fraction `a/b`, `golden` ((√5−1)/2) or `silver` (√2−1).
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub q_max: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct SeifertArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct TransportCheckArgs {
    /// hopfion | torus-knot
    #[arg(long)]
    pub preset: Option<String>,
    /// Transport end time (start is 0).
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn is_false(b: &bool) -> bool {
    !*b
}
