//! Dense matrices, the interference product, and coherence summaries.
//!
//! The data model is small: a matrix `A` whose columns are feature
//! representation vectors, a matrix `B` whose columns are probe vectors, and
//! their interference matrix `C = BᵀA` with entries `C[i][j] = ⟨b_i, a_j⟩`.
//! Linear readout of feature `i` from activations `Az` is `⟨b_i, Az⟩ =
//! (C z)_i`, so everything downstream (worst-case decoding error, separation
//! margins, interference graphs) is a function of `C`.
//!
//! Matrices are immutable after construction and safe to share across
//! threads. Inner products are accumulated in index order with no blocking or
//! reassociation, so results are bitwise reproducible for a fixed input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real matrix, row-major storage.
///
/// Invariants, enforced at construction: `rows >= 1`, `cols >= 1`,
/// `entries.len() == rows * cols`, every entry finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    /// Build from row-major entries, validating all invariants.
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DegenerateInput {
                context: format!("matrix dimensions must be positive, got {rows}x{cols}"),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DegenerateInput {
                context: format!(
                    "entry count {} does not match {rows}x{cols} = {}",
                    entries.len(),
                    rows * cols
                ),
            });
        }
        for (idx, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Build from columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::DegenerateInput {
                context: "no columns supplied".to_string(),
            });
        }
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DegenerateInput {
                    context: format!("column {c} has length {}, expected {rows}", col.len()),
                });
            }
        }
        let mut entries = vec![0.0; rows * cols];
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                entries[r * cols + c] = v;
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry at `(row, col)`. Panics on out-of-bounds indices.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    /// Row `i` as a contiguous slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` copied into a new vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, j)).collect()
    }

    /// Euclidean norm of column `j`, accumulated in row order.
    pub fn column_norm(&self, j: usize) -> f64 {
        let mut s = 0.0;
        for r in 0..self.rows {
            let v = self.get(r, j);
            s += v * v;
        }
        s.sqrt()
    }

    /// Matrix-vector product `M v` where `v` has length `cols`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length must equal cols");
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut s = 0.0;
                for (a, b) in row.iter().zip(v) {
                    s += a * b;
                }
                s
            })
            .collect()
    }

    /// Transposed copy.
    pub fn transposed(&self) -> DenseMatrix {
        let mut entries = vec![0.0; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Copy with column `j` scaled by `factor`.
    pub fn with_scaled_column(&self, j: usize, factor: f64) -> DenseMatrix {
        assert!(j < self.cols, "column index out of bounds");
        let mut entries = self.entries.clone();
        for r in 0..self.rows {
            entries[r * self.cols + j] *= factor;
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Copy with columns permuted: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn with_permuted_columns(&self, perm: &[usize]) -> DenseMatrix {
        assert_eq!(perm.len(), self.cols, "permutation length must equal cols");
        let mut entries = vec![0.0; self.rows * self.cols];
        for r in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                entries[r * self.cols + j] = self.get(r, src);
            }
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

// Deserialization goes through a raw mirror so invariants are re-validated.
impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        DenseMatrix::new(raw.rows, raw.cols, raw.entries).map_err(serde::de::Error::custom)
    }
}

/// Extremes of an interference matrix: diagonal range and the largest
/// off-diagonal magnitude (the coherence `mu`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceSummary {
    pub diag_min: f64,
    pub diag_max: f64,
    /// Maximum of `|C[i][j]|` over `i != j`.
    pub mu: f64,
    /// Lexicographically smallest `(i, j)` attaining `mu`.
    pub argmax_pair: (usize, usize),
}

impl CoherenceSummary {
    /// True when the diagonal is within `diag_tol` of 1 and `mu < mu_bound`
    /// (strict), i.e. the matrix certifies as `mu_bound`-incoherent.
    pub fn is_incoherent(&self, mu_bound: f64, diag_tol: f64) -> bool {
        (self.diag_min - 1.0).abs() <= diag_tol
            && (self.diag_max - 1.0).abs() <= diag_tol
            && self.mu < mu_bound
    }
}

/// Interference product `C = BᵀA`, `C[i][j] = ⟨column i of B, column j of A⟩`.
///
/// Shapes must match exactly. Each inner product is accumulated over the
/// shared dimension in index order, so the result is bitwise reproducible.
pub fn gram(b: &DenseMatrix, a: &DenseMatrix) -> Result<DenseMatrix> {
    if b.rows != a.rows || b.cols != a.cols {
        return Err(Error::ShapeMismatch {
            left_rows: b.rows,
            left_cols: b.cols,
            right_rows: a.rows,
            right_cols: a.cols,
        });
    }
    let m = b.cols;
    // Transposing first makes column dot products contiguous; the summation
    // order over the shared dimension is unchanged.
    let bt = b.transposed();
    let at = a.transposed();

    use rayon::prelude::*;
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let bi = bt.row(i);
            (0..m)
                .map(|j| {
                    let aj = at.row(j);
                    let mut s = 0.0;
                    for (x, y) in bi.iter().zip(aj) {
                        s += x * y;
                    }
                    s
                })
                .collect()
        })
        .collect();

    let mut entries = Vec::with_capacity(m * m);
    for row in rows {
        entries.extend_from_slice(&row);
    }
    DenseMatrix::new(m, m, entries)
}

/// Scan a square interference matrix for its diagonal range and largest
/// off-diagonal magnitude.
///
/// Requires `m >= 2` so that at least one off-diagonal pair exists. Ties in
/// the maximum break toward the lexicographically smallest `(i, j)`.
pub fn coherence(c: &DenseMatrix) -> Result<CoherenceSummary> {
    if c.rows != c.cols {
        return Err(Error::DegenerateInput {
            context: format!("coherence needs a square matrix, got {}x{}", c.rows, c.cols),
        });
    }
    let m = c.rows;
    if m < 2 {
        return Err(Error::DegenerateInput {
            context: "coherence needs at least 2 columns".to_string(),
        });
    }
    let mut diag_min = f64::INFINITY;
    let mut diag_max = f64::NEG_INFINITY;
    let mut mu = f64::NEG_INFINITY;
    let mut argmax_pair = (0, 0);
    for i in 0..m {
        for j in 0..m {
            let v = c.get(i, j);
            if i == j {
                diag_min = diag_min.min(v);
                diag_max = diag_max.max(v);
            } else if v.abs() > mu {
                mu = v.abs();
                argmax_pair = (i, j);
            }
        }
    }
    Ok(CoherenceSummary {
        diag_min,
        diag_max,
        mu,
        argmax_pair,
    })
}

/// Rescale every column to unit Euclidean norm, preserving direction.
pub fn normalize_columns(m: &DenseMatrix) -> Result<DenseMatrix> {
    let mut entries = m.entries.clone();
    for j in 0..m.cols {
        let norm = m.column_norm(j);
        if norm == 0.0 {
            return Err(Error::SingularColumn { col: j });
        }
        for r in 0..m.rows {
            entries[r * m.cols + j] /= norm;
        }
    }
    DenseMatrix::new(m.rows, m.cols, entries)
}
