//! Two-dimensional non-Hermitian Su–Schrieffer–Heeger lattices: Hamiltonian
//! construction, spectral and singular-value diagnostics, non-Bloch and
//! real-space winding numbers, and periodically driven (Floquet) variants.
//!
//! The 2D basis index is `((2·ix + sx)·Ly + iy)·2 + sy`: x cell, x sublattice,
//! y cell, y sublattice, with sublattice `A = 0`, `B = 1`.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod floquet;
pub mod invariants;
pub mod io;
pub mod model;
pub mod numerics;

pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, Scenario, SweepRecord};
pub use model::{Axis, ChainParams, DisorderKind, DisorderRange, DisorderSpec, Model2D, SeparableHamiltonian};
pub use numerics::{c64, ComplexDense, EigResult, SvdTriple};
