//! `interfere` — interference graph diagnostics for a pair.

use std::path::PathBuf;

use serde::Serialize;
use superpose_core::{
    build_graph, exact_independence_number, gram, greedy_independent_set, max_row_interferers,
    turan_edge_floor,
};

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::matrix_io::load_matrix;
use crate::output::emit_json;

#[derive(Debug, clap::Args)]
pub struct InterfereArgs {
    /// Representation matrix path
    #[arg(long)]
    a: Option<PathBuf>,
    /// Probe matrix path
    #[arg(long)]
    b: Option<PathBuf>,
    /// Edge threshold: (i, j) is an edge iff a cross entry exceeds tau
    #[arg(long)]
    tau: Option<f64>,
    /// Also report the forced edge floor for this independence bound
    #[arg(long)]
    r: Option<f64>,
    /// Compute the exact independence number (small graphs only)
    #[arg(long, default_value_t = false)]
    exact_alpha: bool,
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct TuranFloor {
    r: f64,
    floor: f64,
}

#[derive(Serialize)]
struct MaxRow {
    feature: usize,
    count: usize,
}

#[derive(Serialize)]
struct InterfereOutput {
    m: usize,
    tau: f64,
    edge_count: usize,
    edges: Vec<(usize, usize)>,
    max_row: MaxRow,
    greedy_independent_set: Vec<usize>,
    greedy_independent_set_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    turan_floor: Option<TuranFloor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_independence_number: Option<usize>,
}

pub fn run(args: InterfereArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let a_path = require(args.a, cfg.string_value("a")?.map(PathBuf::from), "a")?;
    let b_path = require(args.b, cfg.string_value("b")?.map(PathBuf::from), "b")?;
    let tau = require(args.tau, cfg.f64_value("tau")?, "tau")?;
    let r = args.r.or(cfg.f64_value("r")?);
    let exact_alpha = args.exact_alpha || cfg.bool_value("exact_alpha")?.unwrap_or(false);

    let a = load_matrix(&a_path)?;
    let b = load_matrix(&b_path)?;
    let c = gram(&b, &a)?;
    let graph = build_graph(&c, tau)?;
    let (feature, count) = max_row_interferers(&c, tau)?;
    let independent = greedy_independent_set(&graph);

    let turan = match r {
        Some(r) => Some(TuranFloor {
            r,
            floor: turan_edge_floor(graph.m, r)?,
        }),
        None => None,
    };
    let alpha = if exact_alpha {
        Some(exact_independence_number(&graph)?)
    } else {
        None
    };

    emit_json(
        &InterfereOutput {
            m: graph.m,
            tau: graph.tau,
            edge_count: graph.edge_count(),
            edges: graph.edges.iter().copied().collect(),
            max_row: MaxRow { feature, count },
            greedy_independent_set_size: independent.len(),
            greedy_independent_set: independent,
            turan_floor: turan,
            exact_independence_number: alpha,
        },
        args.out.as_deref(),
        deterministic,
    )
}
