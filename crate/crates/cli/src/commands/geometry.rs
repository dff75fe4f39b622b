//! `geometry` — cosine geometry verification in one of two modes.

use std::path::PathBuf;

use superpose_core::{verify_construction_geometry, verify_norm_bounded_geometry};

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::matrix_io::load_matrix;
use crate::output::emit_json;

#[derive(Debug, clap::Args)]
pub struct GeometryArgs {
    /// Representation matrix path
    #[arg(long)]
    a: Option<PathBuf>,
    /// Probe matrix path
    #[arg(long)]
    b: Option<PathBuf>,
    /// Correlated-pair mode: correlation level (requires --tol)
    #[arg(long)]
    delta: Option<f64>,
    /// Correlated-pair mode: slack on the level
    #[arg(long)]
    tol: Option<f64>,
    /// Norm-capped mode: readout accuracy (requires --gamma)
    #[arg(long)]
    eps: Option<f64>,
    /// Norm-capped mode: column norm cap
    #[arg(long)]
    gamma: Option<f64>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: GeometryArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let a_path = require(args.a, cfg.string_value("a")?.map(PathBuf::from), "a")?;
    let b_path = require(args.b, cfg.string_value("b")?.map(PathBuf::from), "b")?;
    let delta = args.delta.or(cfg.f64_value("delta")?);
    let tol = args.tol.or(cfg.f64_value("tol")?);
    let eps = args.eps.or(cfg.f64_value("eps")?);
    let gamma = args.gamma.or(cfg.f64_value("gamma")?);

    let construction_mode = delta.is_some() || tol.is_some();
    let norm_mode = eps.is_some() || gamma.is_some();
    if construction_mode == norm_mode {
        return Err(CliError::Usage(
            "pick exactly one mode: --delta with --tol, or --eps with --gamma".into(),
        ));
    }

    let a = load_matrix(&a_path)?;
    let b = load_matrix(&b_path)?;
    let report = if construction_mode {
        let delta = require(delta, None, "delta")?;
        let tol = require(tol, None, "tol")?;
        verify_construction_geometry(&a, &b, delta, tol)?
    } else {
        let eps = require(eps, None, "eps")?;
        let gamma = require(gamma, None, "gamma")?;
        verify_norm_bounded_geometry(&a, &b, eps, gamma)?
    };
    emit_json(&report, args.out.as_deref(), deterministic)
}
