//! `scan` — minimal embedding dimension search over seeded constructions.

use std::path::PathBuf;

use superpose_core::min_dimension_scan;

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::output::emit_csv;

#[derive(Debug, clap::Args)]
pub struct ScanArgs {
    /// Feature count
    #[arg(long)]
    m: Option<usize>,
    /// Sparsity budget
    #[arg(long)]
    k: Option<usize>,
    /// Readout accuracy target
    #[arg(long)]
    eps: Option<f64>,
    /// Seeded constructions per dimension
    #[arg(long)]
    trials: Option<usize>,
    /// Success fraction a dimension must reach
    #[arg(long)]
    threshold: Option<f64>,
    /// Smallest dimension to consider
    #[arg(long)]
    dmin: Option<usize>,
    /// Largest dimension to consider
    #[arg(long)]
    dmax: Option<usize>,
    /// RNG seed; trial outcomes are a pure function of (seed, d, trial)
    #[arg(long)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: ScanArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let m = require(args.m, cfg.usize_value("m")?, "m")?;
    let k = require(args.k, cfg.usize_value("k")?, "k")?;
    let eps = require(args.eps, cfg.f64_value("eps")?, "eps")?;
    let trials = require(args.trials, cfg.usize_value("trials")?, "trials")?;
    let threshold = require(args.threshold, cfg.f64_value("threshold")?, "threshold")?;
    let dmin = require(args.dmin, cfg.usize_value("dmin")?, "dmin")?;
    let dmax = require(args.dmax, cfg.usize_value("dmax")?, "dmax")?;
    let seed = require(args.seed, cfg.u64_value("seed")?, "seed")?;

    let result = min_dimension_scan(m, k, eps, trials, threshold, dmin, dmax, seed)?;
    let mut csv = result.to_csv();
    // result metadata travels as trailing comment lines
    match result.d_star {
        Some(d) => csv.push_str(&format!("# d_star={d}\n")),
        None => csv.push_str("# d_star=not_found\n"),
    }
    csv.push_str(&format!(
        "# eps_in_quadratic_regime={}\n",
        result.eps_in_quadratic_regime
    ));
    emit_csv(&csv, args.out.as_deref(), deterministic)
}
