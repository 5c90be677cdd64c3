use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "veerflow", version, about = "Flow graphs, polynomials and growth rates of veering triangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// A triangulation: a `.vtg` file, a file holding a taut isoSig, or an isoSig itself.
#[derive(Args, Debug, Clone)]
pub struct Input {
    pub file: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sizes, δ_τ and the fan-length histogram.
    Info(Input),
    /// Re-derive every veering invariant and report pass/fail.
    Validate(Input),
    /// Emit Γ, Φ, the turn table or the branch and AB cycles.
    Graphs {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "gamma")]
        emit: GraphEmit,
    },
    /// The veering polynomial.
    Poly {
        #[command(flatten)]
        input: Input,
        /// Also compute the clique polynomial of Φ and compare.
        #[arg(long)]
        clique: bool,
    },
    /// Cone generators, layeredness, and an optional dual-cone test.
    Cone {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        test: Option<PathBuf>,
    },
    /// Restricted flow graph and polynomials for a carried class.
    Restrict {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        class: PathBuf,
    },
    /// Growth rate of a class, optionally after cutting.
    Growth {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        cut: Option<PathBuf>,
        /// Also count weighted cycles up to this weight and report the estimate.
        #[arg(long)]
        oracle: Option<i64>,
    },
    /// Entropy along a ray or a segment of classes.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: PathBuf,
        /// Segment end; without it the scan runs along the ray of `--from`.
        #[arg(long)]
        to: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        samples: i64,
        #[arg(long)]
        cut: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Growth rates of α + iη against the limit over the face of η.
    Accumulate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        eta: PathBuf,
        #[arg(long, default_value_t = 60)]
        imax: usize,
    },
    /// A descending patch of a dynamic plane with its structural checks.
    Plane {
        #[command(flatten)]
        input: Input,
        /// Edge class of the seed sector.
        #[arg(long)]
        seed: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Write the full patch here.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Also check pushdown containment up to this Γ-distance.
        #[arg(long, default_value_t = 0)]
        pushdown: usize,
    },
    /// Resolve a Γ-cycle to a flow cycle or an odd AB cycle.
    Resolve {
        #[command(flatten)]
        input: Input,
        /// Face ids of the cycle, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Also compute the width of the dynamic plane.
        #[arg(long)]
        width: bool,
    },
    /// Run a manifest of `file command args...` lines.
    Batch {
        manifest: PathBuf,
        /// Directory for the per-line result documents.
        #[arg(long, default_value = "batch-out")]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphEmit {
    Gamma,
    Phi,
    Turns,
    Cycles,
}
