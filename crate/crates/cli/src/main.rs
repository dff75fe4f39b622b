//! `superpose` — experiments on linear sparse-feature embeddings.
//!
//! Every randomized command is a pure function of its parameters and seed;
//! rerunning with `--deterministic` yields byte-identical artifacts. JSON
//! outputs follow the schema files shipped under `schemas/`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod errors;
mod matrix_io;
mod output;

use config::ConfigMap;
use errors::CliError;

const LONG_ABOUT: &str = "\
Experiments on linear sparse-feature embeddings: build incoherent matrix
families, measure exact worst-case linear decoding error, scan for minimal
embedding dimensions, and diagnose interference structure.

Exit codes:
  0  success
  1  runtime error (I/O, construction failure)
  2  usage error (bad flags or parameters, mismatched shapes)
  3  parse error in an input file

Environment:
  SUPERPOSE_THREADS  cap the worker thread count (default: all cores)";

#[derive(Parser)]
#[command(name = "superpose", version, about = "Linear sparse-feature embedding experiments", long_about = LONG_ABOUT)]
struct Cli {
    /// JSON config file supplying parameter defaults (flags override)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Suppress generation-time metadata so reruns are byte-identical
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a seeded matrix (or matrix pair) and write it to disk
    Gen(commands::gen::GenArgs),
    /// Exact worst-case decoding error of a pair at sparsity k (JSON)
    Check(commands::check::CheckArgs),
    /// Scan for the minimal dimension meeting a success threshold (CSV)
    Scan(commands::scan::ScanArgs),
    /// Interference graph diagnostics (JSON)
    Interfere(commands::interfere::InterfereArgs),
    /// Cosine geometry verification (JSON)
    Geometry(commands::geometry::GeometryArgs),
    /// Binary-feature separation margins (JSON)
    Threshold(commands::threshold::ThresholdArgs),
    /// Nonlinear vs linear recovery across the dimension ladder (CSV)
    Gap(commands::gap::GapArgs),
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("SUPERPOSE_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                // ignore failure: the pool may already be initialized
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let cfg = ConfigMap::load(cli.config.as_deref())?;
    let deterministic = cli.deterministic || cfg.bool_value("deterministic")?.unwrap_or(false);
    match cli.command {
        Command::Gen(args) => commands::gen::run(args, &cfg),
        Command::Check(args) => commands::check::run(args, &cfg, deterministic),
        Command::Scan(args) => commands::scan::run(args, &cfg, deterministic),
        Command::Interfere(args) => commands::interfere::run(args, &cfg, deterministic),
        Command::Geometry(args) => commands::geometry::run(args, &cfg, deterministic),
        Command::Threshold(args) => commands::threshold::run(args, &cfg, deterministic),
        Command::Gap(args) => commands::gap::run(args, &cfg, deterministic),
    }
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on malformed or unknown flags
    let cli = Cli::parse();
    init_thread_pool();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
