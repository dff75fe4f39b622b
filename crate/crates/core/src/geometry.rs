//! Cosine geometry of representation and probe directions.
//!
//! Accurate linear readout constrains the *cross* alignment ⟨a_i, b_j⟩, not
//! the mutual alignment of representations (or of probes) with each other.
//! Two verifiers make that concrete:
//!
//! * [`verify_construction_geometry`] checks the deliberately unintuitive
//!   regime realized by [`crate::constructions::shifted_pair`]: every
//!   feature's own probe is nearly orthogonal to its representation
//!   (self-cosine below `δ`), while distinct representations are mutually
//!   correlated above `1 − δ`, and likewise distinct probes.
//! * [`verify_norm_bounded_geometry`] checks the opposite regime: once all
//!   column norms are capped at `γ` and readout is `ε`-accurate, each
//!   feature's probe and representation must align (self-cosine at least
//!   `(1−ε)/γ²`) and distinct features must stay nearly orthogonal (pair
//!   cosines at most `εγ²/(1−ε) + √(1 − (1−ε)²/γ⁴)`).
//!
//! As norms approach 1 and `ε → 0` the second verifier's bounds collapse to
//! "one direction per feature, all directions orthogonal".

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Which bound family a report was checked against, with per-clause results.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BoundsChecked {
    /// Shifted-construction clauses at level `delta` with slack `tol`:
    /// (i) `max_self_cosine < delta + tol`,
    /// (ii) `min_rep_pair_cosine > 1 - delta - tol`,
    /// (iii) `min_probe_pair_cosine > 1 - delta - tol`.
    Construction {
        delta: f64,
        tol: f64,
        clause_self: bool,
        clause_rep_pairs: bool,
        clause_probe_pairs: bool,
    },
    /// Norm-capped clauses at accuracy `epsilon` and cap `gamma`:
    /// (i) `min_self_cosine >= (1-eps)/gamma^2`,
    /// (ii) `max_rep_pair_cosine <= pair_bound`,
    /// (iii) `max_probe_pair_cosine <= pair_bound`.
    NormBounded {
        epsilon: f64,
        gamma: f64,
        self_bound: f64,
        pair_bound: f64,
        clause_self: bool,
        clause_rep_pairs: bool,
        clause_probe_pairs: bool,
    },
}

impl BoundsChecked {
    /// True when all three clauses passed.
    pub fn all_pass(&self) -> bool {
        match *self {
            BoundsChecked::Construction {
                clause_self,
                clause_rep_pairs,
                clause_probe_pairs,
                ..
            }
            | BoundsChecked::NormBounded {
                clause_self,
                clause_rep_pairs,
                clause_probe_pairs,
                ..
            } => clause_self && clause_rep_pairs && clause_probe_pairs,
        }
    }
}

/// Exact cosine extrema of a representation/probe pair, plus the clause
/// verdicts they were checked against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    /// `max_i |cos(a_i, b_i)|`.
    pub max_self_cosine: f64,
    /// `min_i cos(a_i, b_i)` (signed).
    pub min_self_cosine: f64,
    /// `min_{i != j} cos(a_i, a_j)` (signed).
    pub min_rep_pair_cosine: f64,
    /// `max_{i != j} cos(a_i, a_j)` (signed).
    pub max_rep_pair_cosine: f64,
    pub min_probe_pair_cosine: f64,
    pub max_probe_pair_cosine: f64,
    pub bounds_checked: BoundsChecked,
}

/// Cosine of the angle between `u` and `v`, clamped to `[-1, 1]` so that
/// rounding can never push it outside the geometric range.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DegenerateInput {
            context: format!("vector lengths differ: {} vs {}", u.len(), v.len()),
        });
    }
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (x, y) in u.iter().zip(v) {
        dot += x * y;
        nu += x * x;
        nv += y * y;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

struct CosineExtrema {
    max_self_abs: f64,
    min_self: f64,
    min_rep: f64,
    max_rep: f64,
    min_probe: f64,
    max_probe: f64,
}

fn cosine_extrema(a: &DenseMatrix, b: &DenseMatrix) -> Result<CosineExtrema> {
    let m = a.cols();
    // Normalize once; all extrema reduce to inner products of unit columns.
    let an = crate::matrix::normalize_columns(a)?;
    let bn = crate::matrix::normalize_columns(b)?;
    let ant = an.transposed();
    let bnt = bn.transposed();

    use rayon::prelude::*;
    let rows: Vec<(f64, f64, f64, f64, f64, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let ai = ant.row(i);
            let bi = bnt.row(i);
            let self_cos = dot(ai, bi).clamp(-1.0, 1.0);
            let mut min_rep = f64::INFINITY;
            let mut max_rep = f64::NEG_INFINITY;
            let mut min_probe = f64::INFINITY;
            let mut max_probe = f64::NEG_INFINITY;
            for j in (i + 1)..m {
                let ca = dot(ai, ant.row(j)).clamp(-1.0, 1.0);
                let cb = dot(bi, bnt.row(j)).clamp(-1.0, 1.0);
                min_rep = min_rep.min(ca);
                max_rep = max_rep.max(ca);
                min_probe = min_probe.min(cb);
                max_probe = max_probe.max(cb);
            }
            (self_cos.abs(), self_cos, min_rep, max_rep, min_probe, max_probe)
        })
        .collect();

    let mut ex = CosineExtrema {
        max_self_abs: f64::NEG_INFINITY,
        min_self: f64::INFINITY,
        min_rep: f64::INFINITY,
        max_rep: f64::NEG_INFINITY,
        min_probe: f64::INFINITY,
        max_probe: f64::NEG_INFINITY,
    };
    for (sa, s, mr, xr, mp, xp) in rows {
        ex.max_self_abs = ex.max_self_abs.max(sa);
        ex.min_self = ex.min_self.min(s);
        ex.min_rep = ex.min_rep.min(mr);
        ex.max_rep = ex.max_rep.max(xr);
        ex.min_probe = ex.min_probe.min(mp);
        ex.max_probe = ex.max_probe.max(xp);
    }
    Ok(ex)
}

#[inline]
fn dot(u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in u.iter().zip(v) {
        s += x * y;
    }
    s
}

fn check_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    if a.cols() < 2 {
        return Err(Error::DegenerateInput {
            context: "geometry verification needs at least 2 columns".to_string(),
        });
    }
    Ok(())
}

/// Check the shifted-construction clauses at level `delta`.
///
/// The finite-size deviation around `delta` depends on the coherence of the
/// base matrix, and shrinks as the base gets more incoherent; `tol` is the
/// caller's explicit slack for it. Clause (i) bounds `|cos|`; clauses
/// (ii)/(iii) bound the signed pair cosines from below.
pub fn verify_construction_geometry(
    a: &DenseMatrix,
    b: &DenseMatrix,
    delta: f64,
    tol: f64,
) -> Result<GeometryReport> {
    check_pair(a, b)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            requirement: "0 < delta < 1",
        });
    }
    if tol < 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            requirement: "tol >= 0",
        });
    }
    let ex = cosine_extrema(a, b)?;
    let bounds = BoundsChecked::Construction {
        delta,
        tol,
        clause_self: ex.max_self_abs < delta + tol,
        clause_rep_pairs: ex.min_rep > 1.0 - delta - tol,
        clause_probe_pairs: ex.min_probe > 1.0 - delta - tol,
    };
    Ok(GeometryReport {
        max_self_cosine: ex.max_self_abs,
        min_self_cosine: ex.min_self,
        min_rep_pair_cosine: ex.min_rep,
        max_rep_pair_cosine: ex.max_rep,
        min_probe_pair_cosine: ex.min_probe,
        max_probe_pair_cosine: ex.max_probe,
        bounds_checked: bounds,
    })
}

/// Slack allowed on the norm-cap precondition, absorbing unit-normalization
/// rounding (a nominally unit column can measure `1 + O(1e-16)`).
const NORM_CAP_SLACK: f64 = 1e-12;

/// Check the norm-capped clauses at accuracy `epsilon` and cap `gamma`.
///
/// Requires every column of `A` and `B` to have norm at most `gamma`
/// (violations are listed by column index). The clause guarantees assume
/// `(A, B)` actually achieves `epsilon`-accurate readout; that is the
/// caller's responsibility and is deliberately not re-checked here.
pub fn verify_norm_bounded_geometry(
    a: &DenseMatrix,
    b: &DenseMatrix,
    epsilon: f64,
    gamma: f64,
) -> Result<GeometryReport> {
    check_pair(a, b)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            requirement: "0 < epsilon < 1",
        });
    }
    if gamma < 1.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            requirement: "gamma >= 1",
        });
    }
    let mut offenders: Vec<usize> = Vec::new();
    for j in 0..a.cols() {
        if a.column_norm(j) > gamma + NORM_CAP_SLACK || b.column_norm(j) > gamma + NORM_CAP_SLACK
        {
            offenders.push(j);
        }
    }
    if !offenders.is_empty() {
        return Err(Error::NormBoundViolated { gamma, offenders });
    }

    let g2 = gamma * gamma;
    let self_bound = (1.0 - epsilon) / g2;
    let pair_bound =
        epsilon * g2 / (1.0 - epsilon) + (1.0 - (1.0 - epsilon).powi(2) / (g2 * g2)).max(0.0).sqrt();

    let ex = cosine_extrema(a, b)?;
    let bounds = BoundsChecked::NormBounded {
        epsilon,
        gamma,
        self_bound,
        pair_bound,
        clause_self: ex.min_self >= self_bound,
        clause_rep_pairs: ex.max_rep <= pair_bound,
        clause_probe_pairs: ex.max_probe <= pair_bound,
    };
    Ok(GeometryReport {
        max_self_cosine: ex.max_self_abs,
        min_self_cosine: ex.min_self,
        min_rep_pair_cosine: ex.min_rep,
        max_rep_pair_cosine: ex.max_rep,
        min_probe_pair_cosine: ex.min_probe,
        max_probe_pair_cosine: ex.max_probe,
        bounds_checked: bounds,
    })
}
