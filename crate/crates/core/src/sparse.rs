//! Sparse feature vectors.
//!
//! A `SparseVector` is a `k`-sparse point of the feature space: at most `k`
//! of its `m` coordinates are nonzero. Continuous mode allows values in
//! `[-1, 1]`; binary mode restricts them to `{0, 1}` and stores only the 1s.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Which value range the vector's nonzeros come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValueMode {
    /// Nonzero values in `[-1, 1]`.
    Continuous,
    /// Nonzero values all exactly 1.
    Binary,
}

/// Sparse vector over dimension `dim` with sorted, distinct support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseVector {
    dim: usize,
    support: Vec<usize>,
    values: Vec<f64>,
    mode: ValueMode,
}

impl SparseVector {
    /// Continuous-mode vector from `(index, value)` pairs.
    pub fn continuous(dim: usize, pairs: &[(usize, f64)]) -> Result<Self> {
        let support: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
        let values: Vec<f64> = pairs.iter().map(|&(_, v)| v).collect();
        Self::validate_support(dim, &support)?;
        for (&i, &v) in support.iter().zip(&values) {
            if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidSparseVector {
                    reason: format!("value {v} at index {i} outside [-1, 1]"),
                });
            }
        }
        Ok(Self {
            dim,
            support,
            values,
            mode: ValueMode::Continuous,
        })
    }

    /// Binary-mode vector: the listed indices carry value 1.
    pub fn binary(dim: usize, support: &[usize]) -> Result<Self> {
        Self::validate_support(dim, support)?;
        Ok(Self {
            dim,
            support: support.to_vec(),
            values: vec![1.0; support.len()],
            mode: ValueMode::Binary,
        })
    }

    fn validate_support(dim: usize, support: &[usize]) -> Result<()> {
        if support.len() > dim {
            return Err(Error::InvalidSparseVector {
                reason: format!("support size {} exceeds dimension {dim}", support.len()),
            });
        }
        for w in support.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidSparseVector {
                    reason: format!("support not strictly increasing at {} >= {}", w[0], w[1]),
                });
            }
        }
        if let Some(&last) = support.last() {
            if last >= dim {
                return Err(Error::InvalidSparseVector {
                    reason: format!("index {last} out of range for dimension {dim}"),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mode(&self) -> ValueMode {
        self.mode
    }

    /// Number of nonzeros.
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    /// Dense copy of length `dim`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    /// Embed through a matrix: `A z`, requiring `A.cols() == dim`.
    pub fn embed(&self, a: &DenseMatrix) -> Result<Vec<f64>> {
        if a.cols() != self.dim {
            return Err(Error::DegenerateInput {
                context: format!(
                    "matrix has {} columns but vector has dimension {}",
                    a.cols(),
                    self.dim
                ),
            });
        }
        let mut out = vec![0.0; a.rows()];
        for (&j, &v) in self.support.iter().zip(&self.values) {
            for r in 0..a.rows() {
                out[r] += v * a.get(r, j);
            }
        }
        Ok(out)
    }

    /// Random continuous vector with exactly `k` nonzeros, each `+1` or `-1`.
    ///
    /// Support is a uniform `k`-subset; deterministic in the supplied RNG.
    pub fn random_signed(dim: usize, k: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        if k > dim {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                requirement: "k <= dim",
            });
        }
        // Floyd's algorithm for a uniform k-subset.
        let mut chosen = std::collections::BTreeSet::new();
        for j in (dim - k)..dim {
            let t = rng.random_range(0..=j);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        let pairs: Vec<(usize, f64)> = chosen
            .into_iter()
            .map(|i| (i, if rng.random::<bool>() { 1.0 } else { -1.0 }))
            .collect();
        Self::continuous(dim, &pairs)
    }
}
