//! Finite topological groupoids and the machinery built on top of them:
//! convolution *-algebras, kernels and measures for finite Haar systems,
//! unitary representations, and the reconstruction of a groupoid from its
//! matrix coefficients.
//!
//! Everything here is exact-combinatorial or double-precision numerical;
//! all comparisons go through the crate-wide tolerance [`TOL`].

pub mod algebra;
pub mod error;
pub mod groupoid;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod tannaka;

pub use error::CoreError;
pub use groupoid::{
    build_action_groupoid, build_cyclic_group, build_group_groupoid, build_pair_groupoid,
    build_quantum_ratchet, build_symmetric_s3, FiniteGroupoid, MorphismId, ObjectId, Section,
};

/// Absolute componentwise comparison tolerance for all scalar checks.
pub const TOL: f64 = 1e-9;

/// Eigenvalue clustering threshold used when splitting commutant spectra.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
