use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod classify;
mod commands;
mod strong;

/// Hereditary rigidity of relations under partial functions.
///
/// Exit status: 0 when the checked property holds, 1 when it fails, 2 on
/// usage, input or capacity errors.
#[derive(Debug, Parser)]
#[command(name = "rigidrel", version)]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "RIGIDREL_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide hereditary ell-rigidity of a relation file.
    Check {
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Build a verified hereditarily ell-rigid relation.
    Construct {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        h: usize,
        /// Write the relation here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the compact mask_hex encoding.
        #[arg(long)]
        compact: bool,
    },
    /// Classify every nonempty relation of the given shape.
    Classify(classify::ClassifyArgs),
    /// Print the counting bounds for a shape as CSV.
    Bounds {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Checks on the strongly rigid family over {0,1}.
    Strong {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        args: strong::StrongArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Phi,
    Witness,
    Chain,
    Limit,
}

type Outcome = Result<bool, Box<dyn Error>>;

fn run(cli: Cli) -> Outcome {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()?;
    }
    match cli.command {
        Command::Check { relation, ell } => commands::check(&relation, ell),
        Command::Construct {
            k,
            ell,
            h,
            out,
            compact,
        } => commands::construct(k, ell, h, out.as_deref(), compact),
        Command::Classify(args) => classify::run(&args),
        Command::Bounds { ell, h, k } => commands::bounds(ell, h, k),
        Command::Strong { suite, args } => match suite {
            Suite::Phi => strong::separators(&args),
            Suite::Witness => strong::witness(&args),
            Suite::Chain => strong::chain(&args),
            Suite::Limit => strong::limit(&args),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
