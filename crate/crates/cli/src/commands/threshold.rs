//! `threshold` — separation margins for binary features, optionally pushed
//! through a monotone activation with per-feature bias.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use superpose_core::{monotone_transform_separation, separation_margins, MarginReport};

use crate::config::{require, ConfigMap};
use crate::errors::CliError;
use crate::matrix_io::{load_matrix, load_vector};
use crate::output::emit_json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Identity,
    Tanh,
    Relu,
}

impl SigmaArg {
    fn name(self) -> &'static str {
        match self {
            SigmaArg::Identity => "identity",
            SigmaArg::Tanh => "tanh",
            SigmaArg::Relu => "relu",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            SigmaArg::Identity => x,
            SigmaArg::Tanh => x.tanh(),
            SigmaArg::Relu => x.max(0.0),
        }
    }

    fn from_name(name: &str) -> Result<Self, CliError> {
        SigmaArg::from_str(name, true)
            .map_err(|_| CliError::Usage(format!("unknown activation `{name}`")))
    }
}

#[derive(Debug, clap::Args)]
pub struct ThresholdArgs {
    /// Representation matrix path
    #[arg(long)]
    a: Option<PathBuf>,
    /// Probe matrix path
    #[arg(long)]
    b: Option<PathBuf>,
    /// Sparsity budget
    #[arg(long)]
    k: Option<usize>,
    /// Also test separability through this activation
    #[arg(long, value_enum)]
    sigma: Option<SigmaArg>,
    /// Per-feature bias file (m whitespace-separated floats; default zeros)
    #[arg(long)]
    offset: Option<PathBuf>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct TransformOutcome {
    sigma: &'static str,
    separable: bool,
}

#[derive(Serialize)]
struct ThresholdOutput {
    #[serde(flatten)]
    margins: MarginReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    transform: Option<TransformOutcome>,
}

pub fn run(args: ThresholdArgs, cfg: &ConfigMap, deterministic: bool) -> Result<(), CliError> {
    let a_path = require(args.a, cfg.string_value("a")?.map(PathBuf::from), "a")?;
    let b_path = require(args.b, cfg.string_value("b")?.map(PathBuf::from), "b")?;
    let k = require(args.k, cfg.usize_value("k")?, "k")?;
    let sigma = match args.sigma {
        Some(s) => Some(s),
        None => match cfg.string_value("sigma")? {
            Some(name) => Some(SigmaArg::from_name(&name)?),
            None => None,
        },
    };
    let offset_path = args.offset.or(cfg.string_value("offset")?.map(PathBuf::from));

    let a = load_matrix(&a_path)?;
    let b = load_matrix(&b_path)?;
    let margins = separation_margins(&a, &b, k)?;

    let transform = match sigma {
        None => None,
        Some(s) => {
            let offset = match &offset_path {
                Some(path) => {
                    let v = load_vector(path)?;
                    if v.len() != a.cols() {
                        return Err(CliError::Usage(format!(
                            "offset has {} values, expected {}",
                            v.len(),
                            a.cols()
                        )));
                    }
                    v
                }
                None => vec![0.0; a.cols()],
            };
            let separable =
                monotone_transform_separation(&a, &b, k, |x| s.apply(x), &offset)?;
            Some(TransformOutcome {
                sigma: s.name(),
                separable,
            })
        }
    };

    emit_json(
        &ThresholdOutput { margins, transform },
        args.out.as_deref(),
        deterministic,
    )
}
