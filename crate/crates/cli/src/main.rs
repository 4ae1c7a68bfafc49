//! `wdrd`: generate, check and classify weakly distance-regular digraphs.
//!
//! Results go to standard output (or `--out`), diagnostics and timing to
//! standard error. Exit status: 0 on success, 1 when an `--expect` condition
//! fails, 2 on usage or I/O errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "wdrd", version, about = "Weakly distance-regular digraph toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a generated graph in DGF.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Also write the vertex subset labels (Johnson families only).
        #[arg(long, global = true, value_name = "PATH")]
        labels: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether a digraph is a (commutative) WDRD.
    Check {
        /// DGF file; standard input when omitted or `-`.
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        expect: Option<CheckExpect>,
        /// Also evaluate the local counting identity on every class at
        /// underlying distance 1 or 2.
        #[arg(long)]
        local: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the attached scheme: classes, valencies, intersection numbers.
    Scheme {
        input: Option<PathBuf>,
        /// Include the intersection matrix of every class.
        #[arg(long)]
        matrices: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Neighbourhood and mu-graph checks on a Johnson or folded Johnson graph.
    Structure {
        /// `johnson N E` or `folded-johnson E`.
        #[arg(long, num_args = 2..=3, value_name = "SPEC", required = true)]
        graph: Vec<String>,
        /// Check an evenly spaced sample of edges instead of all of them.
        #[arg(long, value_name = "K")]
        sample: Option<usize>,
        /// Exit with status 1 unless every check passes.
        #[arg(long)]
        expect_pass: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate orientations of a graph and classify the commutative WDRDs.
    Search {
        /// A DGF file, `johnson N E`, or `folded-johnson E`.
        #[arg(long, num_args = 1..=3, value_name = "SPEC", required = true)]
        graph: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = PruneArg::None)]
        prune: PruneArg,
        #[arg(long, default_value_t = wdrd_core::search::DEFAULT_MAX_EDGES)]
        max_edges: usize,
        /// Skip candidates whose arc reversal is visited instead.
        #[arg(long)]
        use_reversal: bool,
        /// Vertex cap for canonical forms.
        #[arg(long, default_value_t = wdrd_core::search::DEFAULT_CANON_CAP)]
        canon_cap: usize,
        /// Write one DGF file per isomorphism class into this directory.
        #[arg(long, value_name = "DIR")]
        dgf_dir: Option<PathBuf>,
        /// Exit with status 1 unless exactly this many classes are found.
        #[arg(long, value_name = "K")]
        expect_classes: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether two digraphs are isomorphic.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<IsoExpect>,
        #[arg(long, default_value_t = wdrd_core::search::DEFAULT_CANON_CAP)]
        canon_cap: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenFamily {
    /// `J(n,e)` on the e-subsets of an n-set.
    Johnson { n: usize, e: usize },
    /// The folded Johnson graph on 2e points.
    FoldedJohnson { e: usize },
    /// `Cay(Z_m, S)` with `S` given as a comma-separated list.
    Cayley {
        m: usize,
        #[arg(value_delimiter = ',', num_args = 1.., required = true)]
        set: Vec<usize>,
    },
    /// The complete graph on n vertices.
    Complete { n: usize },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckExpect {
    Wdrd,
    CommutativeWdrd,
    NotWdrd,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoExpect {
    Iso,
    NonIso,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneArg {
    None,
    DigonCount,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
