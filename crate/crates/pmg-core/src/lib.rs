//! Invariants of polarized metrized graphs.
//!
//! A pm-graph is a finite connected graph with positive edge lengths and a
//! nonnegative integer polarization q on vertices. This crate computes its
//! invariants — total length, genus, τ, θ, ε, φ, λ, Z — together with the
//! canonical and admissible measure decompositions, by assembling the
//! discrete Laplacian (conductances 1/length), taking its Moore-Penrose
//! pseudo-inverse through the rank-one shift `(L - J/v)⁻¹ + J/v`, and
//! reading every invariant off the pseudo-inverse entries.
//!
//! Arithmetic is generic over [`scalar::Scalar`]: exact rationals, decimal
//! floats of configurable precision, or machine floats. Self-loops and
//! parallel edges are normalized away by [`reduce`] before any matrix is
//! built, either analytically (with closed-form corrections) or by
//! subdivision.

pub mod error;
pub mod families;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod matrix;
mod par;
pub mod reduce;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{GenusData, PMGraph, ValidationOutcome};
pub use invariants::{compute_all, Computation, ComputeOptions, InvariantSet, MeasureReport};
pub use linalg::{LaplacianSystem, PinvVariant};
pub use num_rational::BigRational;
pub use par::parallel_enabled;
pub use reduce::{CorrectionLedger, LoopStrategy};
pub use scalar::{parse_rational, BigFloat, Scalar, ScalarMode};
