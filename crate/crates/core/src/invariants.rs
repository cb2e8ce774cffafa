//! Topological invariants: non-Bloch windings on the generalized Brillouin
//! zone and the real-space winding built from the SVD of an open-boundary
//! Hamiltonian.

use std::f64::consts::PI;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ChainParams;
use crate::numerics::{self, c64, cplx, ComplexDense, LogTrace, SvdTriple};

/// Windings within this distance of an integer count as quantized.
pub const QUANTIZATION_TOL: f64 = 1e-3;

/// Smallest accepted contour grid.
pub const MIN_GRID: usize = 64;

const MAX_GRID: usize = 1 << 22;
const GAP_FLOOR: f64 = 1e-8;

/// Tolerance on `| |λ| − 1 |` for the spectrum of `P^A·P^B†`.
pub const UNIMODULAR_TOL: f64 = 1e-6;

/// `√|(w − γ/2)/(w + γ/2)|`.
pub fn gbz_radius(p: &ChainParams) -> Result<f64> {
    let den = p.w + p.gamma / 2.0;
    if den == 0.0 {
        return Err(Error::SingularGbz);
    }
    let r = ((p.w - p.gamma / 2.0) / den).abs().sqrt();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::SingularGbz);
    }
    Ok(r)
}

/// Counterclockwise samples `r·e^{ik}`, `k = 2πj/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GbzContour {
    pub radius: f64,
    pub samples: Vec<c64>,
}

impl GbzContour {
    pub fn new(p: &ChainParams, grid: usize) -> Result<Self> {
        let radius = gbz_radius(p)?;
        Ok(Self::with_radius(radius, grid))
    }

    pub fn with_radius(radius: f64, grid: usize) -> Self {
        let samples = (0..grid)
            .map(|j| {
                let k = 2.0 * PI * j as f64 / grid as f64;
                cplx(radius * k.cos(), radius * k.sin())
            })
            .collect();
        GbzContour { radius, samples }
    }

    pub fn k_at(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }
}

/// `h⁺(β) = w − γ/2 + v·β`.
pub fn h_plus(p: &ChainParams, beta: c64) -> c64 {
    cplx(p.w - p.gamma / 2.0, 0.0) + beta * p.v
}

/// `h⁻(β) = w + γ/2 + v/β`.
pub fn h_minus(p: &ChainParams, beta: c64) -> c64 {
    cplx(p.w + p.gamma / 2.0, 0.0) + beta.inv() * p.v
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseWindings {
    /// Winding of `h⁺` around the origin.
    pub plus: f64,
    /// Winding of `h⁻` around the origin.
    pub minus: f64,
    /// `(plus − minus)/2`, rounded.
    pub v: i64,
    /// Grid at which the windings converged.
    pub grid: usize,
}

/// Phase change of `h` along the closed contour, in turns. `None` when a
/// step is too coarse to unwrap reliably.
fn contour_winding<F: Fn(c64) -> c64>(contour: &GbzContour, h: F) -> Result<Option<f64>> {
    let n = contour.samples.len();
    let values: Vec<c64> = contour.samples.iter().map(|&b| h(b)).collect();
    for (j, z) in values.iter().enumerate() {
        if z.norm() < GAP_FLOOR {
            return Err(Error::GapClosing {
                magnitude: z.norm(),
                k: contour.k_at(j),
            });
        }
    }
    let mut total = 0.0;
    for j in 0..n {
        let step = numerics::principal_arg(values[(j + 1) % n] / values[j]);
        if step.abs() > PI / 2.0 {
            return Ok(None);
        }
        total += step;
    }
    Ok(Some(total / (2.0 * PI)))
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= QUANTIZATION_TOL
}

/// Non-Bloch windings of one chain. The grid is doubled until the unwrapped
/// phases are resolvable and both windings sit within [`QUANTIZATION_TOL`] of integers.
pub fn winding_nonbloch_1d(p: &ChainParams, grid: usize) -> Result<PhaseWindings> {
    if grid < MIN_GRID {
        return Err(Error::InvalidInput(format!(
            "contour grid must be at least {MIN_GRID}, got {grid}"
        )));
    }
    p.validate()?;
    let radius = gbz_radius(p)?;
    let mut n = grid;
    loop {
        let contour = GbzContour::with_radius(radius, n);
        let plus = contour_winding(&contour, |b| h_plus(p, b))?;
        let minus = contour_winding(&contour, |b| h_minus(p, b))?;
        if let (Some(plus), Some(minus)) = (plus, minus) {
            if near_integer(plus) && near_integer(minus) {
                let diff = plus.round() as i64 - minus.round() as i64;
                if diff % 2 != 0 {
                    return Err(Error::NotQuantized {
                        value: (plus - minus) / 2.0,
                    });
                }
                return Ok(PhaseWindings {
                    plus,
                    minus,
                    v: diff / 2,
                    grid: n,
                });
            }
        }
        if n >= MAX_GRID {
            return Err(Error::NotQuantized {
                value: match (plus, minus) {
                    (Some(a), Some(b)) => (a - b) / 2.0,
                    _ => f64::NAN,
                },
            });
        }
        n *= 2;
    }
}

/// `V_2D = V_x·V_y`.
pub fn winding_2d(px: &ChainParams, py: &ChainParams, grid: usize) -> Result<i64> {
    let wx = winding_nonbloch_1d(px, grid)?;
    let wy = winding_nonbloch_1d(py, grid)?;
    Ok(wx.v * wy.v)
}

/// `e^{−2πi·j/(Lx·Ly)}` for cells `j = 1..=Lx·Ly`, with `j = ix·Ly + iy + 1`.
pub fn cell_phases(lx: usize, ly: usize) -> Vec<c64> {
    let n = (lx * ly) as f64;
    (1..=lx * ly)
        .map(|j| {
            let theta = -2.0 * PI * j as f64 / n;
            cplx(theta.cos(), theta.sin())
        })
        .collect()
}

/// `Diag[e^{−2πi·j/(Lx·Ly)}] ⊗ 𝕀_channels`, taken literally.
pub fn position_phase_matrix(lx: usize, ly: usize, channels: usize) -> Result<ComplexDense> {
    if lx == 0 || ly == 0 {
        return Err(Error::InvalidInput("lattice extents must be positive".into()));
    }
    if channels != 2 && channels != 4 {
        return Err(Error::InvalidInput(format!(
            "channels must be 2 or 4, got {channels}"
        )));
    }
    let phases = cell_phases(lx, ly);
    let dim = channels * lx * ly;
    let mut p = Mat::<c64>::zeros(dim, dim);
    for i in 0..dim {
        p[(i, i)] = phases[i / channels];
    }
    Ok(p)
}

/// How the cell phases are laid over the `4·Lx·Ly` basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseLayout {
    /// Each site carries the phase of the cell it belongs to.
    #[default]
    CellResolved,
    /// Basis index `i` carries the phase of cell `i / 4`, ignoring the lattice ordering.
    Consecutive,
}

/// Diagonal of the position phase operator in the 2D basis.
pub fn basis_phases(lx: usize, ly: usize, layout: PhaseLayout) -> Vec<c64> {
    let cells = cell_phases(lx, ly);
    let dim = 4 * lx * ly;
    let ny = 2 * ly;
    (0..dim)
        .map(|idx| match layout {
            PhaseLayout::CellResolved => {
                let (xs, ys) = (idx / ny, idx % ny);
                cells[(xs / 2) * ly + ys / 2]
            }
            PhaseLayout::Consecutive => cells[idx / 4],
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealSpaceWinding {
    /// `(1/4πi)·Tr ln(P^A·P^B†)`.
    pub value: f64,
    /// `value` within [`QUANTIZATION_TOL`] of an integer.
    pub quantized: bool,
    pub modulus_deviation: f64,
}

impl RealSpaceWinding {
    pub fn rounded(&self) -> i64 {
        self.value.round() as i64
    }

    fn from_log_trace(lt: LogTrace) -> Self {
        RealSpaceWinding {
            value: lt.value,
            quantized: near_integer(lt.value),
            modulus_deviation: lt.modulus_deviation,
        }
    }
}

/// Real-space winding of an open-boundary Hamiltonian on an `Lx × Ly` lattice.
pub fn real_space_winding(h: &ComplexDense, lx: usize, ly: usize) -> Result<RealSpaceWinding> {
    let dim = 4 * lx * ly;
    if h.nrows() != dim || h.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h.nrows(),
        });
    }
    let dec = numerics::svd(h.as_ref())?;
    winding_from_svd(&dec, &basis_phases(lx, ly, PhaseLayout::CellResolved))
}

/// Winding from an existing SVD and the diagonal of `P`.
pub fn winding_from_svd(dec: &SvdTriple, phases: &[c64]) -> Result<RealSpaceWinding> {
    let dim = dec.s.len();
    if phases.len() != dim || dec.u.nrows() != dim || dec.v.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: phases.len(),
        });
    }
    // P^A·P^B† = U†PU·V†P†V is similar to P·Q·P†·Q† with Q = U·V†.
    let q = &dec.u * dec.v.adjoint();
    let pqp = Mat::from_fn(dim, dim, |i, j| phases[i] * q[(i, j)] * phases[j].conj());
    let product = &pqp * q.adjoint();
    let values = numerics::unitary_eigenvalues(product.as_ref())?;
    let lt = numerics::log_trace_of_spectrum(&values, UNIMODULAR_TOL)?;
    Ok(RealSpaceWinding::from_log_trace(lt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(w: f64, v: f64, gamma: f64) -> ChainParams {
        ChainParams::new(w, v, gamma).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(gbz_radius(&chain(0.0, 1.0, 9.0)).unwrap(), 1.0);
        assert_eq!(gbz_radius(&chain(1.0, 1.0, 0.0)).unwrap(), 1.0);
        assert!((gbz_radius(&chain(1.0, 1.0, 1.5)).unwrap() - (0.25f64 / 1.75).sqrt()).abs() < 1e-15);
        assert!(matches!(gbz_radius(&chain(-1.0, 1.0, 2.0)), Err(Error::SingularGbz)));
    }

    #[test]
    fn contour_is_closed_counterclockwise() {
        let c = GbzContour::new(&chain(1.0, 1.0, 1.5), 128).unwrap();
        assert_eq!(c.samples.len(), 128);
        let z0 = c.samples[0];
        let z1 = c.samples[1];
        assert!((z1 / z0).im > 0.0);
        let last = c.samples[127];
        assert!((z0 - last).norm() < 2.0 * PI * c.radius / 128.0 * 1.01);
    }

    #[test]
    fn nonbloch_examples() {
        assert_eq!(winding_nonbloch_1d(&chain(1.0, 0.25, 0.0), 256).unwrap().v, 0);
        let top = winding_nonbloch_1d(&chain(0.0, 6.0, 9.0), 256).unwrap();
        assert_eq!(top.v, 1);
        assert!((top.plus - 1.0).abs() < 1e-9 && (top.minus + 1.0).abs() < 1e-9);
        assert_eq!(winding_nonbloch_1d(&chain(0.0, 3.0, 9.0), 256).unwrap().v, 0);
    }

    #[test]
    fn nonbloch_rejects_small_grid_and_gap_closing() {
        assert!(winding_nonbloch_1d(&chain(1.0, 1.0, 0.0), 32).is_err());
        assert!(matches!(
            winding_nonbloch_1d(&chain(1.0, 1.0, 0.0), 64),
            Err(Error::GapClosing { .. })
        ));
    }

    #[test]
    fn two_dimensional_product() {
        let py = |vx: f64| chain(0.0, 6.0 * vx, 9.0);
        let px = |vx: f64| chain(1.0, vx, 1.5);
        assert_eq!(winding_2d(&px(1.0), &py(1.0), 256).unwrap(), 1);
        assert_eq!(winding_2d(&px(0.5), &py(0.5), 256).unwrap(), 0);
        assert_eq!(winding_2d(&chain(0.2, 1.0, 0.0), &chain(0.2, 1.0, 0.0), 256).unwrap(), 1);
    }

    #[test]
    fn phase_matrix_examples() {
        let p = position_phase_matrix(1, 1, 4).unwrap();
        for i in 0..4 {
            assert!((p[(i, i)] - cplx(1.0, 0.0)).norm() < 1e-15);
        }
        let p = position_phase_matrix(2, 1, 2).unwrap();
        let expect = [-1.0, -1.0, 1.0, 1.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((p[(i, i)] - cplx(*e, 0.0)).norm() < 1e-15);
        }
        assert!(position_phase_matrix(2, 2, 3).is_err());
    }

    #[test]
    fn cell_resolved_phases_follow_lattice() {
        let (lx, ly) = (3, 2);
        let ph = basis_phases(lx, ly, PhaseLayout::CellResolved);
        let cells = cell_phases(lx, ly);
        // Basis index ((2ix + sx)·Ly + iy)·2 + sy.
        for ix in 0..lx {
            for iy in 0..ly {
                for sx in 0..2 {
                    for sy in 0..2 {
                        let idx = ((2 * ix + sx) * ly + iy) * 2 + sy;
                        assert_eq!(ph[idx], cells[ix * ly + iy]);
                    }
                }
            }
        }
    }
}
