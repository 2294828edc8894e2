//! `kaleido`: verify, search, compose and catalog kaleidoscopes from the
//! command line. JSON goes to stdout, a one-line summary to stderr.
//!
//! Exit status: 0 when the requested object is valid / found / constructed,
//! 1 when it is invalid or nothing was found, 2 on malformed input.

mod catalog;
mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "kaleido", version, about = "Kaleidoscope designs: verification, search and composition")]
pub struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Catalog directory.
    #[arg(long, global = true, env = "KALEIDO_CATALOG", default_value = "catalog")]
    pub catalog: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a design object.
    #[command(subcommand)]
    Verify(Verify),
    /// Search for initial blocks and constrained field elements.
    #[command(subcommand)]
    Search(Search),
    /// Build difference matrices and composite designs.
    #[command(subcommand)]
    Compose(Compose),
    /// Develop a KDF into a kaleidoscope.
    Develop {
        #[arg(long)]
        file: PathBuf,
    },
    /// Turn a 2-(v,k,1) design into a kaleidoscope by copying each block once per color.
    Replicate {
        /// Design in text format (`v=<n>` then one block per line).
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "fano")]
        schema: String,
    },
    /// Exhaustive search for KDFs over Z_v.
    Nonexistence {
        #[arg(long)]
        v: u64,
        #[arg(long, default_value = "fano")]
        schema: String,
        #[arg(long, value_enum, default_value_t = Mode::Count)]
        mode: Mode,
        /// Required for searches known to take very long (Hesse schema).
        #[arg(long)]
        allow_slow: bool,
    },
    /// Replay a table of published initial blocks.
    Reproduce {
        /// Table id; `list` prints the known ids.
        table: String,
    },
    /// Manage the catalog of verified designs.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Count,
    Existence,
}

/// A field given by its order and, for prime powers, an optional modulus.
#[derive(Args, Clone)]
pub struct FieldArgs {
    /// Field order.
    #[arg(long)]
    pub q: u64,
    /// Modulus coefficients, constant term first, e.g. `-3,0,1` for t^2-3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub modulus: Option<Vec<i64>>,
}

#[derive(Subcommand)]
pub enum Verify {
    /// Difference family: `{"group", "blocks", "lambda"?}`.
    Df {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lambda: Option<usize>,
    },
    Kdf {
        #[arg(long)]
        file: PathBuf,
    },
    Kaleidoscope {
        #[arg(long)]
        file: PathBuf,
    },
    Dm {
        #[arg(long)]
        file: PathBuf,
    },
    /// Initial-block predicate, from a block file, a parametric `x`, or listed points.
    Block {
        #[arg(long, conflicts_with_all = ["q", "x", "points"])]
        file: Option<PathBuf>,
        #[command(flatten)]
        field: Option<FieldArgs>,
        /// Parameter of a parametric form.
        #[arg(long, conflicts_with = "points")]
        x: Option<String>,
        #[arg(long, default_value = "fano-affine")]
        form: String,
        /// Comma-separated points, e.g. `0,1,2,12,13,27,24`.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<String>>,
        #[arg(long)]
        schema: Option<String>,
    },
    /// Check that a schema is a 2-(k,h,1) design.
    Schema {
        #[arg(long, default_value = "fano")]
        schema: String,
    },
    Pbd {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum Search {
    /// Smallest x for which a parametric block B(x) is an initial block.
    Parametric {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        form: String,
        /// Only try the first N candidates.
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the generated KDF here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constraint-chain construction used for large fields.
    Asymptotic {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "fano")]
        schema: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest x with x - shift in a given cube class, for every `shift:class`.
    Constrained {
        #[command(flatten)]
        field: FieldArgs,
        /// `shift:class`, class being 0, 1, 2 or an expression in i = class(2), j = class(3) such as `i+1`.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Parametric forms first, then a prefix search.
    Initial {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "fano")]
        schema: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum Compose {
    /// The field difference matrix with k rows.
    Dm {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// Compose two KDFs through a difference matrix over the second group.
    Kdf {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Defaults to the field difference matrix over the right group.
        #[arg(long)]
        dm: Option<PathBuf>,
    },
    /// Place catalog kaleidoscopes on the blocks of a PBD.
    Pbd {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "fano")]
        schema: String,
    },
}

#[derive(Subcommand)]
pub enum CatalogCmd {
    /// Verify and store a KDF or kaleidoscope.
    Add {
        #[arg(long)]
        file: PathBuf,
    },
    List {
        #[arg(long)]
        no_verify: bool,
    },
    Get {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "fano")]
        schema: String,
        #[arg(long)]
        no_verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", kaleido_core::io::to_canonical_string(&outcome.json));
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
