//! Shared fixture builders for the benchmark suites.

use superpose_core::{rademacher_matrix, DenseMatrix, SparseVector};

/// Seeded self-paired instance of the given shape.
pub fn instance(d: usize, m: usize) -> DenseMatrix {
    rademacher_matrix(d, m, 0xBE7C).unwrap()
}

/// Planted k-sparse measurement for decoder benchmarks.
pub fn planted(a: &DenseMatrix, k: usize) -> (SparseVector, Vec<f64>) {
    let mut rng = superpose_core::rng::stream_rng(0x51);
    let z = SparseVector::random_signed(a.cols(), k, &mut rng).unwrap();
    let x = z.embed(a).unwrap();
    (z, x)
}
