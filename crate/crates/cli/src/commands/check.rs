//! `check` — exact worst-case decoding error of a pair at sparsity k.

use std::path::PathBuf;

use serde::Serialize;
use superpose_core::{worst_case_error, RecoveryReport};

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::matrix_io::load_matrix;
use crate::output::emit_json;

#[derive(Debug, clap::Args)]
pub struct CheckArgs {
    /// Representation matrix path
    #[arg(long)]
    a: Option<PathBuf>,
    /// Probe matrix path
    #[arg(long)]
    b: Option<PathBuf>,
    /// Sparsity budget
    #[arg(long)]
    k: Option<usize>,
    /// Accuracy target the max error is compared against (strict <)
    #[arg(long)]
    eps: Option<f64>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CheckOutput {
    #[serde(flatten)]
    report: RecoveryReport,
    epsilon: f64,
    /// True iff `max_error < epsilon`.
    recovered: bool,
}

pub fn run(args: CheckArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let a_path = require(args.a, cfg.string_value("a")?.map(PathBuf::from), "a")?;
    let b_path = require(args.b, cfg.string_value("b")?.map(PathBuf::from), "b")?;
    let k = require(args.k, cfg.usize_value("k")?, "k")?;
    let eps = require(args.eps, cfg.f64_value("eps")?, "eps")?;

    let a = load_matrix(&a_path)?;
    let b = load_matrix(&b_path)?;
    let report = worst_case_error(&a, &b, k)?;
    let recovered = report.max_error < eps;
    emit_json(
        &CheckOutput {
            report,
            epsilon: eps,
            recovered,
        },
        args.out.as_deref(),
        deterministic,
    )
}
