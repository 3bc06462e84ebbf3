//! `trailcount` command line.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "trailcount", version, about = "Count Eulerian tours and A-trails, build gadgets, probe signatures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for the configuration file.
#[derive(Args, Debug, Default)]
pub struct GlobalFlags {
    /// Configuration file; defaults to $TRAILCOUNT_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Working precision in bits for region arithmetic.
    #[arg(long = "prec", global = true)]
    pub precision: Option<usize>,
    #[arg(long = "tol", global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long = "size-cap", global = true)]
    pub size_cap: Option<usize>,
    /// Layer constant C.
    #[arg(long = "const", global = true)]
    pub constant: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count closed route sets of a map, or its VR table when it has externals.
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "et")]
        mode: CountMode,
    },
    /// Build a gadget or check it against its closed form.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Reductions between counting problems.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// A-trails of a plane 4-regular map via spanning trees.
    Kotzig { file: PathBuf },
    /// Signatures of four-terminal gadgets.
    #[command(subcommand)]
    Sig(SigCmd),
    /// Region scan over small gadgets and random glue closure.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    /// Exact mixing of the sweep chain.
    Chain(ChainArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Et,
    Atrail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GadgetKind {
    Xyy,
    Oxy,
    Q,
    Deg4map,
    Shuffle,
    Crossover,
    Smg,
    Sgg,
}

#[derive(Args, Debug, Clone)]
pub struct GadgetParams {
    #[arg(value_enum)]
    pub kind: GadgetKind,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum GadgetCmd {
    /// Emit the gadget as a JSON map.
    Build(GadgetParams),
    /// Compare the built gadget with its closed form.
    Verify(GadgetParams),
}

#[derive(Args, Debug)]
pub struct ReduceIo {
    #[arg(long)]
    pub input: PathBuf,
    /// Write the transformed map here instead of embedding it in the report.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Replace high-degree vertices by Q gadgets; `--primes auto` runs the
    /// full residue pipeline instead.
    To4regular {
        #[command(flatten)]
        io: ReduceIo,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        primes: Option<String>,
        /// Also replace degree-4 vertices.
        #[arg(long)]
        test_mode: bool,
    },
    /// Remove crossings of a straight-line drawing with crossover gadgets.
    Planar {
        #[command(flatten)]
        io: ReduceIo,
        #[arg(long)]
        p: u64,
    },
    /// Tour instance to A-trail instance.
    Atrails {
        #[command(flatten)]
        io: ReduceIo,
    },
    /// Approximation-preserving A-trail instance, optionally evaluated.
    Ap {
        #[command(flatten)]
        io: ReduceIo,
        #[arg(long)]
        eps: f64,
        /// Count A-trails exactly and report the estimate.
        #[arg(long)]
        estimate: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SigCmd {
    /// Signature of a 4-terminal gadget file.
    Of { file: PathBuf },
    /// Glue two gadget files, or two signatures written `a,b,c`.
    Glue { a: String, b: String },
    /// Classify a signature against the region.
    Region { a: String, b: String, c: String },
    /// Exact map gadget for a rational signature.
    SynthMap {
        a: String,
        b: String,
        c: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Graph gadget within `eps` of a signature in the region.
    SynthGraph {
        a: String,
        b: String,
        c: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Region constants u and w.
    Constants,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCmd {
    /// Classify the signature of every gadget up to `n` vertices.
    RegionScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        loops: bool,
        #[arg(long)]
        dedup: bool,
        /// Emit (alpha, beta, gamma, class) rows as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Glue random pairs of region points and classify the results.
    Closure {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(subcommand)]
    pub calibrate: Option<ChainSub>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ChainSub {
    /// Fit C, or report mixing at one point.
    Calibrate {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
    },
}

fn resolve_config(g: &GlobalFlags) -> Result<RunConfig, String> {
    let mut c = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::from_env()?,
    };
    if let Some(v) = g.threads {
        c.threads = v;
    }
    if let Some(v) = g.precision {
        c.precision = v;
    }
    if let Some(v) = g.tolerance {
        c.tolerance = v;
    }
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = g.budget {
        c.budget = v;
    }
    if let Some(v) = g.size_cap {
        c.size_cap = v;
    }
    if let Some(v) = g.constant {
        c.constant = v;
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if config.threads > 0 {
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build_global();
    }
    match run::dispatch(&cli.command, &config) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(run::Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(run::Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
