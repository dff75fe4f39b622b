//! Interference graphs and edge-count diagnostics.
//!
//! The interference graph at threshold `τ` joins features `i` and `j`
//! whenever either cross readout `|C_ij|` or `|C_ji|` exceeds `τ` (strict).
//! At `τ = ε/k` its structure controls whether accurate linear readout is
//! possible: an independent set is a family of features that can coexist
//! without compounding interference, and if no independent set of size `r`
//! exists, the graph is forced to carry at least `m²/(2r) − m/2` edges
//! (complement Turán count), which in turn forces some row of `C` to hold
//! many large off-diagonal entries. These functions measure those objects
//! on concrete matrices; they prove nothing asymptotic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Undirected graph on feature indices with thresholded interference edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceGraph {
    pub m: usize,
    pub tau: f64,
    /// Unordered pairs stored as `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl InterferenceGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.contains(&key)
    }

    /// Degree of vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| i == v || j == v)
            .count()
    }
}

/// Build the graph: edge `(i, j)` iff `|C_ij| > tau` or `|C_ji| > tau`.
///
/// Boundary values are non-edges (strict comparison).
pub fn build_graph(c: &DenseMatrix, tau: f64) -> Result<InterferenceGraph> {
    if c.rows() != c.cols() {
        return Err(Error::DegenerateInput {
            context: format!(
                "interference graph needs a square matrix, got {}x{}",
                c.rows(),
                c.cols()
            ),
        });
    }
    if tau < 0.0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "tau >= 0",
        });
    }
    let m = c.rows();
    let mut edges = BTreeSet::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if c.get(i, j).abs() > tau || c.get(j, i).abs() > tau {
                edges.insert((i, j));
            }
        }
    }
    Ok(InterferenceGraph { m, tau, edges })
}

/// Row with the most off-diagonal entries above `tau`, and that count.
/// Ties break toward the smallest row index.
pub fn max_row_interferers(c: &DenseMatrix, tau: f64) -> Result<(usize, usize)> {
    if c.rows() != c.cols() {
        return Err(Error::DegenerateInput {
            context: format!(
                "row scan needs a square matrix, got {}x{}",
                c.rows(),
                c.cols()
            ),
        });
    }
    let m = c.rows();
    let mut best = (0, 0);
    for i in 0..m {
        let count = (0..m)
            .filter(|&j| j != i && c.get(i, j).abs() > tau)
            .count();
        if count > best.1 {
            best = (i, count);
        }
    }
    Ok(best)
}

/// Minimum edge count forced on a graph of `m` vertices with no independent
/// set of size `r`: exactly `m²/(2r) − m/2`.
pub fn turan_edge_floor(m: usize, r: f64) -> Result<f64> {
    if !(r >= 2.0 && r <= m as f64) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            requirement: "2 <= r <= m",
        });
    }
    let mf = m as f64;
    Ok(mf * mf / (2.0 * r) - mf / 2.0)
}

/// Maximal independent set found by ascending-degree greedy.
///
/// Deterministic: vertices are considered in (degree, index) order and added
/// when no neighbor is already in the set. This is a lower-bound witness for
/// the independence number, nothing more.
pub fn greedy_independent_set(g: &InterferenceGraph) -> Vec<usize> {
    let mut degree = vec![0_usize; g.m];
    for &(i, j) in &g.edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut order: Vec<usize> = (0..g.m).collect();
    order.sort_by_key(|&v| (degree[v], v));

    let mut in_set = vec![false; g.m];
    let mut blocked = vec![false; g.m];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); g.m];
    for &(i, j) in &g.edges {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    for &v in &order {
        if blocked[v] {
            continue;
        }
        in_set[v] = true;
        for &w in &adjacency[v] {
            blocked[w] = true;
        }
    }
    (0..g.m).filter(|&v| in_set[v]).collect()
}

/// Largest vertex count the exact independence-number search accepts.
pub const EXACT_ALPHA_MAX_M: usize = 24;

/// Exact independence number by branch and bound, guarded to `m <= 24`.
///
/// The greedy witness is the default diagnostic; this exists for small
/// instances where the exact value is affordable.
pub fn exact_independence_number(g: &InterferenceGraph) -> Result<usize> {
    if g.m > EXACT_ALPHA_MAX_M {
        return Err(Error::EnumerationGuard {
            m: g.m,
            k: 0,
            max_m: EXACT_ALPHA_MAX_M,
            max_k: 0,
        });
    }
    let mut neighbors = vec![0_u32; g.m];
    for &(i, j) in &g.edges {
        neighbors[i] |= 1 << j;
        neighbors[j] |= 1 << i;
    }
    let all: u32 = (1_u32 << g.m) - 1;
    let mut best = 0;
    branch(all, 0, &neighbors, &mut best);
    Ok(best)
}

fn branch(candidates: u32, size: usize, neighbors: &[u32], best: &mut usize) {
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    // include v
    branch(
        candidates & !(1 << v) & !neighbors[v],
        size + 1,
        neighbors,
        best,
    );
    // exclude v
    branch(candidates & !(1 << v), size, neighbors, best);
}
