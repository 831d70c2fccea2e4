use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Verification suites for codes, transversal gates and toric-code braiding.
#[derive(Parser, Debug)]
#[command(name = "qholo", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every verb. Each can also be set through `QHOLO_<FLAG>`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Seed for every randomized probe.
    #[arg(long, global = true, env = "QHOLO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override; each verb has its own default.
    #[arg(long, global = true, env = "QHOLO_TOL")]
    pub tol: Option<f64>,
    /// Expected outcome; the exit status is nonzero when it is not met.
    #[arg(long, global = true, env = "QHOLO_EXPECT", allow_hyphen_values = true)]
    pub expect: Option<String>,
    /// Where to write the JSON report. `-` writes it to standard output
    /// instead of the summary.
    #[arg(long, global = true, env = "QHOLO_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel enumeration and probing.
    #[arg(long, global = true, env = "QHOLO_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Brute-force code distance.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        /// Largest Pauli weight to enumerate.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_weight: u64,
    },
    /// Checks the error-correction condition for an error set.
    Correctable {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        errors: ErrorArgs,
    },
    /// Transversal-gate suites.
    Transversal {
        #[command(subcommand)]
        sub: TransversalCmd,
    },
    /// Toric-code defect suites.
    Toric {
        #[command(subcommand)]
        sub: ToricCmd,
    },
    /// Combines several reports into one.
    ReportMerge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CodeArgs {
    /// Code document: {n, qudit_dims, k, frame}.
    #[arg(long, conflicts_with_all = ["fixture", "toric"])]
    pub code: Option<PathBuf>,
    /// Built-in code: `five-qubit`, or `toric-L` for a defect-free torus.
    #[arg(long, conflicts_with = "toric")]
    pub fixture: Option<String>,
    /// Toric configuration document; its defect code is used.
    #[arg(long)]
    pub toric: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct ErrorArgs {
    /// All Paulis of weight at most S.
    #[arg(long, value_name = "S")]
    pub weight: Option<usize>,
    /// Error-set document: a JSON list of Pauli strings.
    #[arg(long, value_name = "FILE")]
    pub errors: Option<PathBuf>,
    /// Geometrically local errors on a toric code: S clusters of diameter T.
    #[arg(long, num_args = 2, value_names = ["S", "T"])]
    pub geolocal: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum TransversalCmd {
    /// Dimension of the logical Lie algebra.
    LieDim {
        #[command(flatten)]
        code: CodeArgs,
        /// Singular-value cutoff for the nullspace.
        #[arg(long, default_value_t = 1e-10)]
        cutoff: f64,
    },
    /// Random exponentials of the Lie algebra act as scalars on the code.
    TrivialAction {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Holonomy of a transversal loop.
    Holonomy {
        #[command(flatten)]
        code: CodeArgs,
        /// `X`, `Y`, `Z`, `R3`, `stabilizer-K`, or a Pauli label such as `XZZXI`.
        #[arg(long)]
        gate: String,
    },
    /// Homotopic path pairs give the same holonomy up to phase.
    Flatness {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ToricArgs {
    /// Toric configuration document: {L, s, primal, dual, braid}.
    #[arg(long, required_unless_present = "period")]
    pub config: Option<PathBuf>,
    /// Period of a defect-free torus, instead of a document.
    #[arg(long = "L", id = "period", conflicts_with = "config")]
    pub period: Option<usize>,
    /// Minimum defect separation, overriding the document.
    #[arg(long)]
    pub separation: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingArg {
    Primary,
    Alternative,
}

#[derive(Subcommand, Debug)]
pub enum ToricCmd {
    /// Builds the defect code and reports its dimension.
    Build {
        #[command(flatten)]
        toric: ToricArgs,
    },
    /// Monodromy of the document's braid word.
    Braid {
        #[command(flatten)]
        toric: ToricArgs,
        #[arg(long, value_enum, default_value_t = RoutingArg::Primary)]
        routing: RoutingArg,
    },
    /// Random braid words routed two ways agree up to phase.
    Flatness {
        #[command(flatten)]
        toric: ToricArgs,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        word_len: usize,
    },
    /// Edge- and face-code geometry checks.
    FaceChecks {
        #[command(flatten)]
        toric: ToricArgs,
    },
}
