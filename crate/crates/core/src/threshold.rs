//! Per-feature linear separation of binary sparse inputs.
//!
//! For binary features (`z ∈ {0,1}^m`, at most `k` active) the readout of
//! feature `i` is `(Cz)_i` with `C = BᵀA`. Feature `i` is linearly separable
//! when some threshold `t_i` has `(Cz)_i > t_i` exactly when `z_i = 1`. The
//! extremal readouts over all admissible `z` are closed-form: the adversary
//! picks which other features to activate, so
//!
//! * the worst *active* readout takes `C_ii` plus the most negative
//!   off-diagonal entries of row `i` — at most `k-1` of them, and only while
//!   they are negative (activating a positive interferer would help);
//! * the best *inactive* readout takes the most positive off-diagonal
//!   entries — at most `k`, only while positive.
//!
//! A positive margin between the two is exactly the existence of a valid
//! threshold. Any strictly increasing activation applied on top (with any
//! bias) preserves the comparison, so separability is unchanged — that
//! reduction is what [`monotone_transform_separation`] implements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{gram, DenseMatrix};

/// Extremal readouts and margin for one feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMargin {
    /// Minimum of `(Cz)_i` over binary k-sparse `z` with `z_i = 1`.
    pub min_active: f64,
    /// Maximum of `(Cz)_i` over binary k-sparse `z` with `z_i = 0`.
    pub max_inactive: f64,
    /// `min_active - max_inactive`; positive iff a threshold exists.
    pub margin: f64,
}

/// Separation analysis of a pair at sparsity `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginReport {
    pub per_feature: Vec<FeatureMargin>,
    /// True iff every feature has strictly positive margin.
    pub separable: bool,
    /// Tight thresholds `t_i = max_inactive_i`; present iff separable.
    /// Valid as `max_inactive_i <= t_i < min_active_i`.
    pub witness_thresholds: Option<Vec<f64>>,
    /// Midpoint thresholds `(min_active_i + max_inactive_i)/2`; present iff
    /// separable. Numerically the most robust choice.
    pub midpoint_thresholds: Option<Vec<f64>>,
    /// Sparsity the margins were computed at.
    pub k: usize,
    /// True when `k < √m`. Margins are exact either way; the quadratic
    /// dimension floor for separation assumes this regime.
    pub k_below_sqrt_m: bool,
}

impl MarginReport {
    fn from_features(per_feature: Vec<FeatureMargin>, k: usize, m: usize) -> Self {
        let separable = per_feature.iter().all(|f| f.margin > 0.0);
        let (witness, midpoint) = if separable {
            (
                Some(per_feature.iter().map(|f| f.max_inactive).collect()),
                Some(
                    per_feature
                        .iter()
                        .map(|f| 0.5 * (f.min_active + f.max_inactive))
                        .collect(),
                ),
            )
        } else {
            (None, None)
        };
        MarginReport {
            per_feature,
            separable,
            witness_thresholds: witness,
            midpoint_thresholds: midpoint,
            k,
            k_below_sqrt_m: (k * k) < m,
        }
    }

    /// Smallest margin across features (the global separation quality).
    pub fn min_margin(&self) -> f64 {
        self.per_feature
            .iter()
            .map(|f| f.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_pair_and_k(a: &DenseMatrix, b: &DenseMatrix, k: usize) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            left_rows: b.rows(),
            left_cols: b.cols(),
            right_rows: a.rows(),
            right_cols: a.cols(),
        });
    }
    if k < 1 || k > a.cols() {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k as f64,
            requirement: "1 <= k <= m",
        });
    }
    Ok(())
}

/// Exact separation margins from the closed-form extremal sums.
pub fn separation_margins(a: &DenseMatrix, b: &DenseMatrix, k: usize) -> Result<MarginReport> {
    check_pair_and_k(a, b, k)?;
    let c = gram(b, a)?;
    Ok(margins_from_interference(&c, k))
}

/// Same computation, evaluated directly on an interference matrix.
pub fn margins_from_interference(c: &DenseMatrix, k: usize) -> MarginReport {
    let m = c.rows();
    use rayon::prelude::*;
    let per_feature: Vec<FeatureMargin> = (0..m)
        .into_par_iter()
        .map(|i| {
            let row = c.row(i);
            let mut negatives: Vec<f64> = Vec::new();
            let mut positives: Vec<f64> = Vec::new();
            for (j, &v) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                if v < 0.0 {
                    negatives.push(v);
                } else if v > 0.0 {
                    positives.push(v);
                }
            }
            negatives.sort_unstable_by(f64::total_cmp); // most negative first
            positives.sort_unstable_by(|x, y| y.total_cmp(x)); // most positive first

            let mut min_active = row[i];
            for &v in negatives.iter().take(k - 1) {
                min_active += v;
            }
            let mut max_inactive = 0.0;
            for &v in positives.iter().take(k) {
                max_inactive += v;
            }
            FeatureMargin {
                min_active,
                max_inactive,
                margin: min_active - max_inactive,
            }
        })
        .collect();
    MarginReport::from_features(per_feature, k, m)
}

/// Largest instance the margin enumeration oracle will accept.
pub const BRUTE_FORCE_MAX_M: usize = 16;
pub const BRUTE_FORCE_MAX_K: usize = 4;

/// Enumeration oracle for [`separation_margins`]: walks every binary `z`
/// with at most `k` ones. Guarded to `m <= 16`, `k <= 4`.
pub fn brute_force_margins(a: &DenseMatrix, b: &DenseMatrix, k: usize) -> Result<MarginReport> {
    check_pair_and_k(a, b, k)?;
    let m = a.cols();
    if m > BRUTE_FORCE_MAX_M || k > BRUTE_FORCE_MAX_K {
        return Err(Error::EnumerationGuard {
            m,
            k,
            max_m: BRUTE_FORCE_MAX_M,
            max_k: BRUTE_FORCE_MAX_K,
        });
    }
    let c = gram(b, a)?;
    let mut min_active = vec![f64::INFINITY; m];
    let mut max_inactive = vec![f64::NEG_INFINITY; m];

    for mask in 0_u32..(1 << m) {
        if mask.count_ones() as usize > k {
            continue;
        }
        for i in 0..m {
            let mut readout = 0.0;
            for j in 0..m {
                if mask >> j & 1 == 1 {
                    readout += c.get(i, j);
                }
            }
            if mask >> i & 1 == 1 {
                min_active[i] = min_active[i].min(readout);
            } else {
                max_inactive[i] = max_inactive[i].max(readout);
            }
        }
    }
    let per_feature = (0..m)
        .map(|i| FeatureMargin {
            min_active: min_active[i],
            max_inactive: max_inactive[i],
            margin: min_active[i] - max_inactive[i],
        })
        .collect();
    Ok(MarginReport::from_features(per_feature, k, m))
}

/// Points sampled (beyond the critical values) when spot-checking that the
/// activation is strictly increasing.
const SIGMA_GRID_POINTS: usize = 33;

/// Decide separability through a monotone activation with bias.
///
/// `sigma` must be strictly increasing on the range the readouts actually
/// cover; this is spot-checked on the per-feature critical values (shifted
/// by `offset`) plus an evenly spaced grid over their span, and a violation
/// is a contract error. Given monotonicity, thresholding `sigma(readout +
/// offset)` separates exactly when the linear margins do, so the return
/// value is `separation_margins(a, b, k).separable`.
pub fn monotone_transform_separation(
    a: &DenseMatrix,
    b: &DenseMatrix,
    k: usize,
    sigma: impl Fn(f64) -> f64,
    offset: &[f64],
) -> Result<bool> {
    check_pair_and_k(a, b, k)?;
    let m = a.cols();
    if offset.len() != m {
        return Err(Error::InvalidParameter {
            name: "offset",
            value: offset.len() as f64,
            requirement: "offset length must equal m",
        });
    }
    let report = separation_margins(a, b, k)?;

    // collect the critical readout values, shifted per-feature
    let mut samples: Vec<f64> = Vec::with_capacity(2 * m + SIGMA_GRID_POINTS);
    for (i, f) in report.per_feature.iter().enumerate() {
        samples.push(f.min_active + offset[i]);
        samples.push(f.max_inactive + offset[i]);
    }
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        for t in 0..SIGMA_GRID_POINTS {
            samples.push(lo + (hi - lo) * t as f64 / (SIGMA_GRID_POINTS - 1) as f64);
        }
    }
    samples.sort_unstable_by(f64::total_cmp);
    // merge points within rounding distance of each other; a strictly
    // increasing map may evaluate equal on floats 1 ulp apart
    let span = (hi - lo).abs().max(1.0);
    samples.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * span);
    for w in samples.windows(2) {
        let (y0, y1) = (sigma(w[0]), sigma(w[1]));
        if !(y1 > y0) {
            return Err(Error::NonMonotoneSigma {
                x0: w[0],
                x1: w[1],
                y0,
                y1,
            });
        }
    }
    Ok(report.separable)
}
