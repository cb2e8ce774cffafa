//! Scalar diagnostics of open-boundary spectra and singular-value spectra:
//! `Min|E|`, `Min[s]`, zero-mode counting, corner localization, wipr, the
//! eigenvector condition number and finite-size scaling of `Min[s]`.
//!
//! Functions taking a dense `H` work for any matrix; the [`SeparableSpectra`]
//! fast paths exploit `H = Hx ⊗ 𝕀 + 𝕀 ⊗ Hy`, whose eigenpairs are sums and
//! tensor products of the 1D eigenpairs.

use faer::{ColRef, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SeparableHamiltonian;
use crate::numerics::{self, c64, ComplexDense, EigResult, SvdTriple};

/// `Min[s]` window that marks a parameter point as close to a gap closing.
pub const TRANSITION_WINDOW: (f64, f64) = (1e-4, 1e-1);

/// Singular values below this are at the floor of double precision.
pub const SCALING_FLOOR: f64 = 1e-14;

pub fn min_abs_energy(h: &ComplexDense) -> Result<f64> {
    let values = numerics::eigenvalues(h.as_ref())?;
    Ok(values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
}

pub fn min_singular(h: &ComplexDense) -> Result<f64> {
    let s = numerics::singular_values(h.as_ref())?;
    Ok(s.last().copied().unwrap_or(0.0))
}

/// Eigendecompositions of both 1D factors of a separable Hamiltonian.
#[derive(Clone, Debug)]
pub struct SeparableSpectra {
    pub lx: usize,
    pub ly: usize,
    pub x: EigResult,
    pub y: EigResult,
}

impl SeparableSpectra {
    pub fn new(sep: &SeparableHamiltonian) -> Result<Self> {
        Ok(SeparableSpectra {
            lx: sep.model.lx,
            ly: sep.model.ly,
            x: numerics::eig(sep.hx.as_ref())?,
            y: numerics::eig(sep.hy.as_ref())?,
        })
    }

    /// All `εx_i + εy_j`, in the 2D basis order.
    pub fn values_2d(&self) -> Vec<c64> {
        self.x
            .values
            .iter()
            .flat_map(|&ex| self.y.values.iter().map(move |&ey| ex + ey))
            .collect()
    }

    pub fn min_abs_energy(&self) -> f64 {
        let mut best = f64::INFINITY;
        for &ex in &self.x.values {
            for &ey in &self.y.values {
                best = best.min((ex + ey).norm());
            }
        }
        best
    }

    /// `κ(Σx ⊗ Σy) = κ(Σx)·κ(Σy)`.
    pub fn condition_number(&self) -> Result<f64> {
        Ok(condition_number(&self.x)? * condition_number(&self.y)?)
    }

    /// wipr of the product eigenstates without forming them.
    pub fn wipr(&self, coords: SiteCoordinates) -> Result<f64> {
        check_normalized(&self.x.vectors)?;
        check_normalized(&self.y.vectors)?;
        let fx = quartic_weights(&self.x.vectors);
        let fy = quartic_weights(&self.y.vectors);
        let mut acc = 0.0;
        for (xs, &wx) in fx.iter().enumerate() {
            if wx == 0.0 {
                continue;
            }
            for (ys, &wy) in fy.iter().enumerate() {
                acc += wx * wy * coords.distance(xs, ys, self.lx, self.ly);
            }
        }
        Ok(acc / (4.0 * self.lx as f64 * self.ly as f64))
    }
}

/// `Σ_n |ψ_n(i)|⁴` per basis index.
fn quartic_weights(vectors: &ComplexDense) -> Vec<f64> {
    let mut w = vec![0.0; vectors.nrows()];
    for j in 0..vectors.ncols() {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi += vectors[(i, j)].norm_sqr().powi(2);
        }
    }
    w
}

fn check_normalized(vectors: &ComplexDense) -> Result<()> {
    for j in 0..vectors.ncols() {
        let norm = vectors.col(j).norm_l2();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { column: j, norm });
        }
    }
    Ok(())
}

/// Coordinate convention for the distance weight of wipr.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteCoordinates {
    /// `x ∈ 1..=2Lx` counts sites (sublattice included), centre at `Lx`.
    #[default]
    Site,
    /// `x ∈ 1..=Lx` counts cells, centre at `Lx/2`.
    Cell,
}

impl SiteCoordinates {
    /// Position of 1D site index `s` (0-based, sublattice included) and the centre.
    fn coordinate(self, s: usize, l: usize) -> (f64, f64) {
        match self {
            SiteCoordinates::Site => ((s + 1) as f64, l as f64),
            SiteCoordinates::Cell => ((s / 2 + 1) as f64, l as f64 / 2.0),
        }
    }

    fn distance(self, xs: usize, ys: usize, lx: usize, ly: usize) -> f64 {
        let (x, cx) = self.coordinate(xs, lx);
        let (y, cy) = self.coordinate(ys, ly);
        (x - cx).hypot(y - cy)
    }
}

/// Weighted inverse participation ratio of unit-normalized right eigenvectors
/// of a 2D Hamiltonian in the standard basis.
pub fn wipr(eig: &EigResult, lx: usize, ly: usize, coords: SiteCoordinates) -> Result<f64> {
    wipr_of_states(&eig.vectors, lx, ly, coords)
}

/// Same as [`wipr`] for an arbitrary set of unit-norm columns; columns are the states summed over.
pub fn wipr_of_states(
    states: &ComplexDense,
    lx: usize,
    ly: usize,
    coords: SiteCoordinates,
) -> Result<f64> {
    let dim = 4 * lx * ly;
    if states.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: states.nrows(),
        });
    }
    check_normalized(states)?;
    let f = quartic_weights(states);
    let ny = 2 * ly;
    let acc: f64 = f
        .iter()
        .enumerate()
        .map(|(idx, &w)| w * coords.distance(idx / ny, idx % ny, lx, ly))
        .sum();
    Ok(acc / (4.0 * lx as f64 * ly as f64))
}

/// `κ = ‖Σ‖₂·‖Σ⁻¹‖₂` of the unit-column eigenvector matrix; `+inf` if `Σ` is numerically singular.
pub fn condition_number(eig: &EigResult) -> Result<f64> {
    numerics::matrix_condition_number(eig.vectors.as_ref())
}

/// How singular values are classified as zero modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroModePolicy {
    /// `s < max(threshold, 10³·ε·‖H‖₂)`.
    Absolute { threshold: f64 },
    /// `s < fraction·s_max`.
    Relative { fraction: f64 },
    /// Zero modes are the values below the widest logarithmic gap among the
    /// values under `ceiling`; the gap must span `min_decades`.
    GapCluster { min_decades: f64, ceiling: f64 },
}

impl Default for ZeroModePolicy {
    fn default() -> Self {
        ZeroModePolicy::Absolute { threshold: 1e-6 }
    }
}

impl ZeroModePolicy {
    pub fn gap_cluster() -> Self {
        ZeroModePolicy::GapCluster {
            min_decades: REQUIRED_GAP_DECADES,
            ceiling: TRANSITION_WINDOW.1,
        }
    }
}

/// Required separation between the zero-mode cluster and the rest.
pub const REQUIRED_GAP_DECADES: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeCount {
    pub count: usize,
    /// No gap of at least [`REQUIRED_GAP_DECADES`] separates the zero modes from the rest.
    pub ambiguous: bool,
    /// Count from gap clustering, reported alongside an ambiguous primary count.
    pub cluster_count: Option<usize>,
    /// `log10(first non-zero / last zero)`.
    pub gap_decades: f64,
}

pub fn zero_mode_count(h: &ComplexDense, policy: ZeroModePolicy) -> Result<ZeroModeCount> {
    let mut s = numerics::singular_values(h.as_ref())?;
    let norm = s.first().copied().unwrap_or(0.0);
    s.reverse();
    Ok(classify_zero_modes(&s, norm, policy))
}

/// Classify ascending singular values; `norm2` is `‖H‖₂`.
pub fn classify_zero_modes(ascending: &[f64], norm2: f64, policy: ZeroModePolicy) -> ZeroModeCount {
    match policy {
        ZeroModePolicy::Absolute { threshold } => {
            let thr = threshold.max(1e3 * f64::EPSILON * norm2);
            threshold_count(ascending, thr)
        }
        ZeroModePolicy::Relative { fraction } => threshold_count(ascending, fraction * norm2),
        ZeroModePolicy::GapCluster {
            min_decades,
            ceiling,
        } => gap_cluster(ascending, min_decades, ceiling),
    }
}

fn decades(hi: f64, lo: f64) -> f64 {
    (hi.max(f64::MIN_POSITIVE) / lo.max(f64::MIN_POSITIVE)).log10()
}

fn threshold_count(ascending: &[f64], thr: f64) -> ZeroModeCount {
    let count = ascending.iter().take_while(|&&s| s < thr).count();
    let gap = match (count, ascending.get(count)) {
        (_, None) => f64::INFINITY,
        (0, Some(&first)) => decades(first, thr),
        (k, Some(&first)) => decades(first, ascending[k - 1]),
    };
    let ambiguous = gap < REQUIRED_GAP_DECADES;
    let cluster_count = ambiguous
        .then(|| gap_cluster(ascending, REQUIRED_GAP_DECADES, TRANSITION_WINDOW.1).count);
    ZeroModeCount {
        count,
        ambiguous,
        cluster_count,
        gap_decades: gap,
    }
}

fn gap_cluster(ascending: &[f64], min_decades: f64, ceiling: f64) -> ZeroModeCount {
    let candidates = ascending.iter().take_while(|&&s| s < ceiling).count();
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 1..=candidates {
        let gap = match ascending.get(k) {
            Some(&next) => decades(next, ascending[k - 1]),
            None => f64::INFINITY,
        };
        if gap > best.1 {
            best = (k, gap);
        }
    }
    if candidates == 0 {
        return ZeroModeCount {
            count: 0,
            ambiguous: false,
            cluster_count: Some(0),
            gap_decades: ascending.first().map_or(f64::INFINITY, |&s| decades(s, ceiling)),
        };
    }
    let ambiguous = best.1 < min_decades;
    let count = if ambiguous { 0 } else { best.0 };
    ZeroModeCount {
        count,
        ambiguous,
        cluster_count: Some(count),
        gap_decades: best.1,
    }
}

/// True when the point sits close to a gap closing: `Min[s]` inside
/// [`TRANSITION_WINDOW`], or the smallest singular value above the zero-mode
/// cluster has dropped below the window's upper edge.
pub fn near_transition(ascending: &[f64], zero_modes: usize) -> bool {
    let (lo, hi) = TRANSITION_WINDOW;
    let min_s = ascending.first().copied().unwrap_or(f64::INFINITY);
    let in_window = min_s > lo && min_s < hi;
    let bulk_edge = ascending.get(zero_modes).copied().unwrap_or(f64::INFINITY);
    in_window || bulk_edge < hi
}

/// Probability density of one state folded onto the `Lx × Ly` cell grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerField {
    pub lx: usize,
    pub ly: usize,
    /// `density[ix·Ly + iy]`, summed over the four sites of each cell.
    pub density: Vec<f64>,
}

impl CornerField {
    pub fn from_state(state: ColRef<'_, c64>, lx: usize, ly: usize) -> Result<Self> {
        let dim = 4 * lx * ly;
        if state.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: state.nrows(),
            });
        }
        let mut density = vec![0.0; lx * ly];
        let ny = 2 * ly;
        for idx in 0..dim {
            let (xs, ys) = (idx / ny, idx % ny);
            density[(xs / 2) * ly + ys / 2] += state[idx].norm_sqr();
        }
        Ok(CornerField { lx, ly, density })
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.density[ix * self.ly + iy]
    }

    pub fn total(&self) -> f64 {
        self.density.iter().sum()
    }

    /// Mass in the quadrants `[(x-, y-), (x-, y+), (x+, y-), (x+, y+)]`.
    /// For odd extents the middle row/column counts toward the upper half.
    pub fn quadrant_masses(&self) -> [f64; 4] {
        let mut q = [0.0; 4];
        for ix in 0..self.lx {
            for iy in 0..self.ly {
                let hx = usize::from(2 * ix >= self.lx);
                let hy = usize::from(2 * iy >= self.ly);
                q[2 * hx + hy] += self.at(ix, iy);
            }
        }
        q
    }

    pub fn max_quadrant_mass(&self) -> f64 {
        self.quadrant_masses().into_iter().fold(0.0, f64::max)
    }

    /// Mass inside the `k × k` cell blocks at each corner, same order as
    /// [`Self::quadrant_masses`].
    pub fn corner_block_masses(&self, k: usize) -> [f64; 4] {
        let kx = k.min(self.lx);
        let ky = k.min(self.ly);
        let mut q = [0.0; 4];
        for (slot, (x_hi, y_hi)) in [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .enumerate()
        {
            for dx in 0..kx {
                for dy in 0..ky {
                    let ix = if x_hi { self.lx - 1 - dx } else { dx };
                    let iy = if y_hi { self.ly - 1 - dy } else { dy };
                    q[slot] += self.at(ix, iy);
                }
            }
        }
        q
    }
}

/// Cell-folded `|vₙ|²` of the right singular vector with the `n`-th smallest
/// singular value (`n = 0` is `Min[s]`).
pub fn singular_corner_state(h: &ComplexDense, lx: usize, ly: usize, n: usize) -> Result<CornerField> {
    let dec = numerics::svd(h.as_ref())?;
    singular_corner_state_from_svd(&dec, lx, ly, n)
}

pub fn singular_corner_state_from_svd(
    dec: &SvdTriple,
    lx: usize,
    ly: usize,
    n: usize,
) -> Result<CornerField> {
    let dim = dec.s.len();
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    CornerField::from_state(dec.v.col(dim - 1 - n), lx, ly)
}

/// Corner-resolved basis of the `count`-dimensional zero-mode subspace.
///
/// Nearly degenerate zero modes come out of the SVD as arbitrary mixtures of
/// states living at different corners. Diagonalizing the projected position
/// operator `x + α·y` inside the subspace separates them again.
pub fn zero_mode_corner_states(
    dec: &SvdTriple,
    count: usize,
    lx: usize,
    ly: usize,
) -> Result<Vec<CornerField>> {
    let dim = dec.s.len();
    if count > dim {
        return Err(Error::IndexOutOfRange { index: count, dim });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let basis = dec.v.subcols(dim - count, count);
    let ny = 2 * ly;
    let alpha = 0.5;
    let position: Vec<f64> = (0..dim)
        .map(|idx| {
            let x = (idx / ny / 2) as f64 - (lx as f64 - 1.0) / 2.0;
            let y = (idx % ny / 2) as f64 - (ly as f64 - 1.0) / 2.0;
            x + alpha * y
        })
        .collect();
    let scaled = Mat::from_fn(dim, count, |i, j| basis[(i, j)] * position[i]);
    let projected = basis.adjoint() * &scaled;
    let evd = projected
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NonConvergence {
            routine: "projected position eigendecomposition",
            dim: count,
        })?;
    let rotated = basis * evd.U();
    (0..count)
        .map(|j| CornerField::from_state(rotated.col(j), lx, ly))
        .collect()
}

/// `Min[s]` against system size with a least-squares fit of `ln Min[s]` vs `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub sizes: Vec<usize>,
    pub min_s: Vec<f64>,
    pub fit_slope: f64,
    pub fit_intercept: f64,
    /// NaN when fewer than three points enter the fit.
    pub fit_r2: f64,
    /// Sizes whose `Min[s]` fell below [`SCALING_FLOOR`] and were left out of the fit.
    pub excluded: Vec<usize>,
}

pub fn scaling_min_singular<F>(mut family: F, sizes: &[usize]) -> Result<ScalingSeries>
where
    F: FnMut(usize) -> Result<ComplexDense>,
{
    if sizes.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "finite-size scaling needs at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    let mut min_s = Vec::with_capacity(sizes.len());
    for &l in sizes {
        min_s.push(min_singular(&family(l)?)?);
    }
    scaling_series(sizes, &min_s)
}

/// Fit an already computed series.
pub fn scaling_series(sizes: &[usize], min_s: &[f64]) -> Result<ScalingSeries> {
    if sizes.len() != min_s.len() {
        return Err(Error::DimensionMismatch {
            expected: sizes.len(),
            found: min_s.len(),
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for (&l, &s) in sizes.iter().zip(min_s) {
        if s < SCALING_FLOOR {
            excluded.push(l);
        } else {
            xs.push(l as f64);
            ys.push(s.ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::InvalidInput(
            "fewer than two sizes above the precision floor".into(),
        ));
    }
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    Ok(ScalingSeries {
        sizes: sizes.to_vec(),
        min_s: min_s.to_vec(),
        fit_slope: slope,
        fit_intercept: intercept,
        fit_r2: if xs.len() >= 3 { r2 } else { f64::NAN },
        excluded,
    })
}

/// Ordinary least squares `y = slope·x + intercept`; returns `(slope, intercept, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}
