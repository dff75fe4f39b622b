//! `gen` — construct a seeded matrix (or pair) and write it to disk.

use std::path::PathBuf;

use clap::ValueEnum;
use superpose_core::{gaussian_unit_matrix, rademacher_matrix, shifted_pair};

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::matrix_io::save_matrix;
use crate::output::pair_paths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// i.i.d. entries of magnitude 1/sqrt(d)
    Rademacher,
    /// standard normal columns rescaled to unit norm
    Gaussian,
    /// correlated representation/probe pair (writes <out>.A and <out>.B)
    Shifted,
}

impl KindArg {
    fn from_name(name: &str) -> Result<Self, CliError> {
        KindArg::from_str(name, true)
            .map_err(|_| CliError::Usage(format!("unknown kind `{name}`")))
    }
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    /// Matrix family to construct
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Embedding dimension (rows)
    #[arg(long)]
    d: Option<usize>,
    /// Feature count (columns)
    #[arg(long)]
    m: Option<usize>,
    /// RNG seed; output is a pure function of it
    #[arg(long)]
    seed: Option<u64>,
    /// Shifted pair: correlation level target
    #[arg(long)]
    delta: Option<f64>,
    /// Shifted pair: readout accuracy target
    #[arg(long)]
    eps: Option<f64>,
    /// Shifted pair: sparsity budget
    #[arg(long)]
    k: Option<usize>,
    /// Output path; `.json` selects the JSON matrix form
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: GenArgs, cfg: &ConfigMap) -> Result<(), CliError> {
    let kind = match args.kind {
        Some(k) => k,
        None => match cfg.string_value("kind")? {
            Some(name) => KindArg::from_name(&name)?,
            None => return Err(CliError::Usage("missing required parameter `--kind`".into())),
        },
    };
    let d = require(args.d, cfg.usize_value("d")?, "d")?;
    let m = require(args.m, cfg.usize_value("m")?, "m")?;
    let seed = require(args.seed, cfg.u64_value("seed")?, "seed")?;
    let out = require(
        args.out,
        cfg.string_value("out")?.map(PathBuf::from),
        "out",
    )?;

    match kind {
        KindArg::Rademacher => {
            let mat = rademacher_matrix(d, m, seed)?;
            save_matrix(&mat, &out)?;
        }
        KindArg::Gaussian => {
            let mat = gaussian_unit_matrix(d, m, seed)?;
            save_matrix(&mat, &out)?;
        }
        KindArg::Shifted => {
            let delta = require(args.delta, cfg.f64_value("delta")?, "delta")?;
            let eps = require(args.eps, cfg.f64_value("eps")?, "eps")?;
            let k = require(args.k, cfg.usize_value("k")?, "k")?;
            let (a, b) = shifted_pair(d, m, delta, eps, k, seed)?;
            let (path_a, path_b) = pair_paths(&out);
            save_matrix(&a, &path_a)?;
            save_matrix(&b, &path_b)?;
        }
    }
    Ok(())
}
