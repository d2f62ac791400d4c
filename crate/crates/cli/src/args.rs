use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rikit::norms::NormDescriptor;
use serde_json::{json, Map, Value};

#[derive(Debug, Parser)]
#[command(name = "rikit", version, about = "Exact experiments with rearrangement-invariant norms")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Master seed; per-instance seeds are derived from it.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness mean, norm profile, tail norms and growth rounds.
    VerifyCounterexample {
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        /// Rounds of the growth demo.
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Disjoint-average searches under L² and the counterexample norm.
    AoceaSearch {
        #[arg(long, default_value_t = 64)]
        k_max: usize,
        /// Number of sets in each decreasing sequence.
        #[arg(long, default_value_t = 18)]
        depth: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Span decompositions and distance descent.
    SpanDistance {
        #[arg(long, default_value_t = 100)]
        m: u64,
        /// Line searches for each descent.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        norm: NormArgs,
    },
    /// All randomized lemma checks.
    PropertySuite {
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
    /// One norm of a step function read from a JSON file.
    Norm {
        #[command(flatten)]
        norm: NormArgs,
        /// Segments as `[{"t0": "0/1", "t1": "1/2", "v": "3/1"}, ...]`.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// l1, linf, lp, lorentz, orlicz or counterexample.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// A number or `inf`.
    #[arg(long)]
    pub q: Option<String>,
    /// `u^p` or `exp(u)-1`.
    #[arg(long)]
    pub phi: Option<String>,
}

impl NormArgs {
    /// The descriptor, or `default_kind` when no kind is given.
    pub fn descriptor(&self, default: NormDescriptor) -> Result<NormDescriptor, String> {
        let Some(kind) = &self.kind else {
            return Ok(default);
        };
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(kind));
        if let Some(p) = self.p {
            obj.insert("p".into(), json!(p));
        }
        if let Some(q) = &self.q {
            let v = if q.eq_ignore_ascii_case("inf") {
                json!("inf")
            } else {
                json!(q.parse::<f64>().map_err(|e| format!("--q {q}: {e}"))?)
            };
            obj.insert("q".into(), v);
        }
        if let Some(phi) = &self.phi {
            obj.insert("phi".into(), json!(phi));
        }
        NormDescriptor::from_json_value(&Value::Object(obj)).map_err(|e| e.to_string())
    }
}
