//! Linear sparse-feature embeddings at desk scale.
//!
//! A layer that stores `m` features in `d < m` dimensions assigns each
//! feature a *representation* direction `a_i` (added to the activation when
//! the feature is present) and a *probe* direction `b_i` (whose inner
//! product reads the feature back out). Readout quality is governed by the
//! interference matrix `C = BᵀA`: the readout of feature `i` on input `z`
//! is `(Cz)_i`, so a near-identity `C` means every feature can be read
//! linearly despite the dimension deficit.
//!
//! This crate measures that story exactly, rather than asymptotically:
//!
//! * [`matrix`] — dense matrices, the interference product, coherence.
//! * [`sparse`] — `k`-sparse feature vectors, continuous and binary.
//! * [`constructions`] — seeded random incoherent families, the dimension
//!   formula, and the correlated shifted pair.
//! * [`recovery`] — exact worst-case linear decoding error (closed form and
//!   enumeration oracle) and the minimal-dimension scanner.
//! * [`interference`] — thresholded interference graphs, forced edge
//!   counts, independent-set witnesses.
//! * [`geometry`] — cosine geometry verifiers for both the correlated and
//!   the norm-capped regimes.
//! * [`threshold`] — separation margins for binary features and the
//!   monotone-activation reduction.
//! * [`baseline`] — OMP and iterative-shrinkage decoders plus the
//!   linear-vs-nonlinear gap experiment.
//! * [`io`] — exact-round-trip matrix serialization.
//!
//! Everything randomized is a pure function of an explicit `u64` seed (see
//! [`rng`]); all result types are plain data and serialize with serde.

pub mod baseline;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod interference;
pub mod io;
pub mod matrix;
pub mod recovery;
pub mod rng;
pub mod sparse;
pub mod threshold;

pub use baseline::{gap_experiment, l1_decode, omp_decode, DecodeResult, GapReport, GapRow};
pub use constructions::{
    dimension_for_incoherence, gaussian_unit_matrix, rademacher_matrix, shifted_pair,
    ConstructionSpec, MatrixKind, ShiftedParams,
};
pub use error::{Error, Result};
pub use geometry::{
    cosine, verify_construction_geometry, verify_norm_bounded_geometry, BoundsChecked,
    GeometryReport,
};
pub use interference::{
    build_graph, exact_independence_number, greedy_independent_set, max_row_interferers,
    turan_edge_floor, InterferenceGraph,
};
pub use matrix::{coherence, gram, normalize_columns, CoherenceSummary, DenseMatrix};
pub use recovery::{
    brute_force_error, min_dimension_scan, recovery_check, worst_case_error, PhaseScanResult,
    RecoveryReport,
};
pub use sparse::{SparseVector, ValueMode};
pub use threshold::{
    brute_force_margins, monotone_transform_separation, separation_margins, FeatureMargin,
    MarginReport,
};
