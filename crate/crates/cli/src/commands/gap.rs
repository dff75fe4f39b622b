//! `gap` — nonlinear vs linear recovery success across the dimension ladder.

use std::path::PathBuf;

use superpose_core::gap_experiment;

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::output::emit_csv;

#[derive(Debug, clap::Args)]
pub struct GapArgs {
    /// Feature count
    #[arg(long)]
    m: Option<usize>,
    /// Sparsity budget
    #[arg(long)]
    k: Option<usize>,
    /// Accuracy target for the linear side
    #[arg(long)]
    eps: Option<f64>,
    /// Trials per dimension rung
    #[arg(long)]
    trials: Option<usize>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: GapArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let m = require(args.m, cfg.usize_value("m")?, "m")?;
    let k = require(args.k, cfg.usize_value("k")?, "k")?;
    let eps = require(args.eps, cfg.f64_value("eps")?, "eps")?;
    let trials = require(args.trials, cfg.usize_value("trials")?, "trials")?;
    let seed = require(args.seed, cfg.u64_value("seed")?, "seed")?;

    let report = gap_experiment(m, k, eps, trials, seed)?;
    emit_csv(&report.to_csv(), args.out.as_deref(), deterministic)
}
