mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use arboreal::FieldChoice;

/// Hard cap on tree sizes for sweeps.
pub const MAX_TREE_CAP: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "arboreal", version, about = "Exact computations on arboreal singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// `rational` or a prime (`7`, `prime:7`, `F7`).
    #[arg(long, global = true, default_value = "rational")]
    pub field: FieldChoice,
    #[arg(long, global = true, default_value_t = 4)]
    pub max_tree_size: usize,
    /// Highest Hochschild / cyclic degree computed.
    #[arg(long, global = true, default_value_t = 4)]
    pub degree_bound: usize,
    #[arg(long, global = true, default_value_t = 1, allow_hyphen_values = true)]
    pub orientation_sign: i64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Root vertex name, overriding the outermost vertex of the tree.
    #[arg(long, global = true)]
    pub root: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Correspondences of a tree.
    Enumerate { tree: String },
    /// Simplex counts of the order complex, or its Hasse diagram as DOT.
    Nerve { tree: String },
    /// Stalks of the Hom sheaf of two indecomposable projectives.
    Homsheaf {
        tree: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Closed-form dualizing complex against the dual of the constant sheaf.
    Dualizing { tree: String },
    /// Canonical orientation and endomorphisms of the dualizing complex.
    Orient { tree: String },
    /// Nondegeneracy of the orientation for all pairs of projectives.
    Nondegen { tree: String },
    /// Relative Euler identity on the comb for random filtered complexes.
    Comb {
        #[arg(long, default_value_t = 2)]
        spokes: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Duality on the circle for random local systems.
    Circle {
        /// Spokes as `position:sign`, comma separated, e.g. `0.1:+,0.6:-`.
        #[arg(long, default_value = "")]
        spokes: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Orientation cocycle of a glued space.
    W1 {
        /// Glued space as JSON.
        #[arg(long, conflicts_with_all = ["comb", "circle"])]
        space: Option<PathBuf>,
        /// Comb with this many spokes.
        #[arg(long)]
        comb: Option<usize>,
        /// Circle with this many evenly spaced spokes.
        #[arg(long)]
        circle: Option<usize>,
        /// Reverse the orientation of these overlaps.
        #[arg(long, value_delimiter = ',')]
        flip: Vec<usize>,
    },
    /// Braid closure of an irregular type.
    StokesLink {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        slope: usize,
        #[arg(long)]
        half_integer: bool,
    },
    /// Every check over all rooted trees up to `--max-tree-size`.
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
