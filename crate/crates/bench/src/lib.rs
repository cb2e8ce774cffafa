//! Shared fixtures for the benchmarks.

use nhsvd_core::experiment::Scenario;
use nhsvd_core::model::{real_h2d, DEFAULT_MAX_DIM};
use nhsvd_core::{ComplexDense, Model2D};

/// Corner-mode model of the SVD scenarios at `l × l` cells.
pub fn corner_model(vx: f64, l: usize) -> Model2D {
    Scenario::Fig3a.preset().model.build(vx, l, l).expect("valid preset")
}

pub fn corner_hamiltonian(vx: f64, l: usize) -> ComplexDense {
    real_h2d(&corner_model(vx, l), DEFAULT_MAX_DIM).expect("within the dimension cap")
}
