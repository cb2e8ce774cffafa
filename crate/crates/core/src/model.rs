//! Bloch and open-boundary Hamiltonians of the tensor-product SSH lattice,
//! plus the two disorder ensembles.
//!
//! Basis convention shared by every module: inside a 1D cell the order is
//! `(A, B)`; the 2D basis is lexicographic in
//! `(x-cell, x-sublattice, y-cell, y-sublattice)`, so the flat index of a
//! site is `((2·ix + sx)·Ly + iy)·2 + sy`, i.e. `x_site·2Ly + y_site`.

use faer::Mat;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, c64, cplx, ComplexDense};

/// Default cap on the dimension of any dense 2D matrix.
pub const DEFAULT_MAX_DIM: usize = 8192;

/// Hopping parameters of one SSH direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Intra-cell hopping.
    pub w: f64,
    /// Inter-cell hopping.
    pub v: f64,
    /// Non-Hermitian asymmetry of the intra-cell hopping.
    pub gamma: f64,
}

impl ChainParams {
    pub fn new(w: f64, v: f64, gamma: f64) -> Result<Self> {
        let p = ChainParams { w, v, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w.is_finite() && self.v.is_finite() && self.gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "chain parameters must be finite: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn with_v(self, v: f64) -> Self {
        ChainParams { v, ..self }
    }

    /// Amplitude of the A→B matrix element inside a cell, `w + γ/2`.
    pub fn intra_ab(&self) -> f64 {
        self.w + 0.5 * self.gamma
    }

    /// Amplitude of the B→A matrix element inside a cell, `w − γ/2`.
    pub fn intra_ba(&self) -> f64 {
        self.w - 0.5 * self.gamma
    }
}

/// Two chains on an `Lx × Ly` grid of 4-site unit cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model2D {
    pub x: ChainParams,
    pub y: ChainParams,
    pub lx: usize,
    pub ly: usize,
}

impl Model2D {
    pub fn new(x: ChainParams, y: ChainParams, lx: usize, ly: usize) -> Result<Self> {
        let m = Model2D { x, y, lx, ly };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.lx == 0 || self.ly == 0 {
            return Err(Error::InvalidInput(format!(
                "lattice extents must be positive (Lx = {}, Ly = {})",
                self.lx, self.ly
            )));
        }
        Ok(())
    }

    /// Real-space dimension `4·Lx·Ly`.
    pub fn dim(&self) -> usize {
        4 * self.lx * self.ly
    }

    pub fn check_dim(&self, max_dim: usize) -> Result<()> {
        check_dim(self.dim(), max_dim)
    }
}

pub(crate) fn check_dim(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderKind {
    /// Random A–B couplings only; anticommutes with the chiral operator.
    #[serde(alias = "chiral")]
    ChiralPreserving,
    /// Every matrix element random; breaks chiral symmetry.
    #[serde(alias = "random")]
    FullyRandom,
}

/// Which cell pairs `(i, j)` receive random couplings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderRange {
    /// All cell pairs.
    #[default]
    Dense,
    /// Only `|i − j| ≤ 1`.
    NearestNeighbor,
}

impl DisorderRange {
    fn allows(self, ci: usize, cj: usize) -> bool {
        match self {
            DisorderRange::Dense => true,
            DisorderRange::NearestNeighbor => ci.abs_diff(cj) <= 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    /// `d` for chiral disorder, `d′` for fully random disorder.
    pub strength: f64,
    pub seed: u64,
    #[serde(default)]
    pub range: DisorderRange,
    /// Force the realization to be a symmetric (Hermitian) matrix.
    #[serde(default)]
    pub symmetric: bool,
}

impl DisorderSpec {
    pub fn chiral(strength: f64, seed: u64) -> Self {
        DisorderSpec {
            kind: DisorderKind::ChiralPreserving,
            strength,
            seed,
            range: DisorderRange::Dense,
            symmetric: false,
        }
    }

    pub fn random(strength: f64, seed: u64) -> Self {
        DisorderSpec {
            kind: DisorderKind::FullyRandom,
            ..Self::chiral(strength, seed)
        }
    }

    pub fn with_range(self, range: DisorderRange) -> Self {
        DisorderSpec { range, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        DisorderSpec { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strength.is_finite() && self.strength >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "disorder strength must be finite and non-negative, got {}",
                self.strength
            )));
        }
        Ok(())
    }

    /// One realization for a chain of `l` cells; `axis` selects an independent
    /// random stream so x and y draws never coincide.
    pub fn realize(&self, l: usize, axis: Axis) -> Result<ComplexDense> {
        self.validate()?;
        if l == 0 {
            return Err(Error::InvalidInput("chain length must be positive".into()));
        }
        let mut rng = disorder_rng(self.seed, axis);
        let n = 2 * l;
        let mut out = Mat::<c64>::zeros(n, n);
        if self.strength == 0.0 {
            return Ok(out);
        }
        match self.kind {
            DisorderKind::ChiralPreserving => {
                let unit = Uniform::new_inclusive(-0.5, 0.5).expect("valid range");
                for i in 0..l {
                    for j in 0..l {
                        if !self.range.allows(i, j) {
                            continue;
                        }
                        let k_ij = unit.sample(&mut rng);
                        let k_ji = unit.sample(&mut rng);
                        out[(2 * i, 2 * j + 1)] = cplx(self.strength * k_ij, 0.0);
                        if !self.symmetric {
                            out[(2 * j + 1, 2 * i)] = cplx(self.strength * k_ji, 0.0);
                        }
                    }
                }
                if self.symmetric {
                    for i in 0..l {
                        for j in 0..l {
                            out[(2 * j + 1, 2 * i)] = out[(2 * i, 2 * j + 1)];
                        }
                    }
                }
            }
            DisorderKind::FullyRandom => {
                let dist = Uniform::new_inclusive(-self.strength, self.strength)
                    .expect("valid range");
                for c in 0..n {
                    for r in 0..n {
                        if !self.range.allows(r / 2, c / 2) || (self.symmetric && r > c) {
                            continue;
                        }
                        out[(r, c)] = cplx(dist.sample(&mut rng), 0.0);
                    }
                }
                if self.symmetric {
                    for c in 0..n {
                        for r in (c + 1)..n {
                            out[(r, c)] = out[(c, r)];
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Lattice direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

fn disorder_rng(seed: u64, axis: Axis) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match axis {
        Axis::X => 0,
        Axis::Y => 1,
    });
    rng
}

/// Deterministic child seed for `(point, realization)` under a base seed, so
/// sweeps give the same draws regardless of evaluation order.
pub fn derive_seed(base: u64, point: u64, realization: u64) -> u64 {
    let mut z = splitmix(base ^ splitmix(point.wrapping_add(0x51_7cc1_b727_220a)));
    z = splitmix(z ^ splitmix(realization.wrapping_add(0x2545_f491_4f6c_dd1d)));
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `(w + v·cos k)σx + (v·sin k + iγ/2)σy`.
pub fn bloch_h1d(p: &ChainParams, k: f64) -> ComplexDense {
    let hx = cplx(p.w + p.v * k.cos(), 0.0);
    let hy = cplx(p.v * k.sin(), 0.5 * p.gamma);
    let i = cplx(0.0, 1.0);
    let mut h = Mat::zeros(2, 2);
    h[(0, 1)] = hx - i * hy;
    h[(1, 0)] = hx + i * hy;
    h
}

pub fn bloch_h2d(px: &ChainParams, py: &ChainParams, kx: f64, ky: f64) -> ComplexDense {
    numerics::tensor_sum(bloch_h1d(px, kx).as_ref(), bloch_h1d(py, ky).as_ref())
        .expect("2x2 blocks are square")
}

/// Open-boundary chain of `l` cells.
pub fn real_h1d(p: &ChainParams, l: usize) -> Result<ComplexDense> {
    p.validate()?;
    if l == 0 {
        return Err(Error::InvalidInput("chain length must be positive".into()));
    }
    let n = 2 * l;
    let mut h = Mat::zeros(n, n);
    for i in 0..l {
        h[(2 * i, 2 * i + 1)] = cplx(p.intra_ab(), 0.0);
        h[(2 * i + 1, 2 * i)] = cplx(p.intra_ba(), 0.0);
        if i + 1 < l {
            h[(2 * i + 1, 2 * i + 2)] = cplx(p.v, 0.0);
            h[(2 * i + 2, 2 * i + 1)] = cplx(p.v, 0.0);
        }
    }
    Ok(h)
}

/// `Hx ⊗ 𝕀(2Ly) + 𝕀(2Lx) ⊗ Hy` with open boundaries.
pub fn real_h2d(m: &Model2D, max_dim: usize) -> Result<ComplexDense> {
    m.validate()?;
    m.check_dim(max_dim)?;
    numerics::tensor_sum(
        real_h1d(&m.x, m.lx)?.as_ref(),
        real_h1d(&m.y, m.ly)?.as_ref(),
    )
}

/// Chiral-preserving disorder `d·(κ_ij a†_i b_j + κ_ji b†_j a_i)` on a chain of `l` cells.
pub fn chiral_disorder_1d(l: usize, d: f64, seed: u64) -> Result<ComplexDense> {
    DisorderSpec::chiral(d, seed).realize(l, Axis::X)
}

/// Fully random disorder, every entry uniform on `[−d′, d′]`.
pub fn random_disorder_1d(l: usize, dprime: f64, seed: u64) -> Result<ComplexDense> {
    DisorderSpec::random(dprime, seed).realize(l, Axis::X)
}

/// `real_h2d(m) + dx ⊗ 𝕀 + 𝕀 ⊗ dy`.
pub fn assemble_perturbed_2d(
    m: &Model2D,
    dx: &ComplexDense,
    dy: &ComplexDense,
    max_dim: usize,
) -> Result<ComplexDense> {
    SeparableHamiltonian::from_parts(m, dx, dy)?.assemble(max_dim)
}

/// `diag(+1, −1, +1, −1, …)` on a chain of `l` cells.
pub fn chiral_operator_1d(l: usize) -> Vec<f64> {
    (0..2 * l).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

/// `Γx ⊗ Γy` as a diagonal.
pub fn chiral_operator_2d(lx: usize, ly: usize) -> Vec<f64> {
    let gx = chiral_operator_1d(lx);
    let gy = chiral_operator_1d(ly);
    gx.iter()
        .flat_map(|a| gy.iter().map(move |b| a * b))
        .collect()
}

/// `‖Γ H Γ⁻¹ + H‖_max` for a diagonal sign operator `Γ`; zero iff `H` is chiral.
pub fn chiral_defect(h: &ComplexDense, gamma: &[f64]) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for c in 0..n {
        for r in 0..n {
            let z = h[(r, c)] * (gamma[r] * gamma[c]) + h[(r, c)];
            worst = worst.max(z.norm());
        }
    }
    worst
}

/// The two (possibly disordered) 1D factors of a separable 2D Hamiltonian.
#[derive(Clone, Debug)]
pub struct SeparableHamiltonian {
    pub model: Model2D,
    pub hx: ComplexDense,
    pub hy: ComplexDense,
}

impl SeparableHamiltonian {
    pub fn clean(m: &Model2D) -> Result<Self> {
        m.validate()?;
        Ok(SeparableHamiltonian {
            model: *m,
            hx: real_h1d(&m.x, m.lx)?,
            hy: real_h1d(&m.y, m.ly)?,
        })
    }

    /// Clean model plus one disorder realization on each axis.
    pub fn with_disorder(m: &Model2D, disorder: Option<&DisorderSpec>) -> Result<Self> {
        let mut sep = Self::clean(m)?;
        if let Some(spec) = disorder {
            sep.hx = &sep.hx + spec.realize(m.lx, Axis::X)?;
            sep.hy = &sep.hy + spec.realize(m.ly, Axis::Y)?;
        }
        Ok(sep)
    }

    pub fn from_parts(m: &Model2D, dx: &ComplexDense, dy: &ComplexDense) -> Result<Self> {
        let mut sep = Self::clean(m)?;
        for (d, h) in [(dx, &sep.hx), (dy, &sep.hy)] {
            if d.nrows() != h.nrows() || d.ncols() != h.ncols() {
                return Err(Error::DimensionMismatch {
                    expected: h.nrows(),
                    found: if d.nrows() != h.nrows() {
                        d.nrows()
                    } else {
                        d.ncols()
                    },
                });
            }
        }
        sep.hx = &sep.hx + dx;
        sep.hy = &sep.hy + dy;
        Ok(sep)
    }

    pub fn assemble(&self, max_dim: usize) -> Result<ComplexDense> {
        self.model.check_dim(max_dim)?;
        numerics::tensor_sum(self.hx.as_ref(), self.hy.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: c64, b: c64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn bloch_dimerized_limit_is_sigma_x() {
        let h = bloch_h1d(&ChainParams::new(1.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(close(h[(0, 1)], cplx(1.0, 0.0)) && close(h[(1, 0)], cplx(1.0, 0.0)));
        assert!(close(h[(0, 0)], cplx(0.0, 0.0)) && close(h[(1, 1)], cplx(0.0, 0.0)));
    }

    #[test]
    fn bloch_entries_at_k_zero() {
        let h = bloch_h1d(&ChainParams::new(1.0, 0.5, 1.0).unwrap(), 0.0);
        assert!(close(h[(0, 1)], cplx(2.0, 0.0)));
        assert!(close(h[(1, 0)], cplx(1.0, 0.0)));
    }

    #[test]
    fn bloch_entries_at_quarter_turn() {
        for v in [-2.0, 0.3, 1.7] {
            let h = bloch_h1d(&ChainParams::new(1.0, v, 1.5).unwrap(), FRAC_PI_2);
            assert!(close(h[(0, 1)], cplx(1.75, -v)));
            assert!(close(h[(1, 0)], cplx(0.25, v)));
        }
    }

    #[test]
    fn bloch_2d_with_empty_y_block() {
        let px = ChainParams::new(0.7, -0.4, 0.9).unwrap();
        let py = ChainParams::new(0.0, 0.0, 0.0).unwrap();
        let h = bloch_h2d(&px, &py, 0.3, 1.1);
        let expect = numerics::kron(bloch_h1d(&px, 0.3).as_ref(), numerics::identity(2).as_ref());
        assert!(max_abs_diff(h.as_ref(), expect.as_ref()) < 1e-15);
    }

    #[test]
    fn real_chain_construction_audit() {
        let h = real_h1d(&ChainParams::new(1.0, 0.5, 1.0).unwrap(), 2).unwrap();
        let mut expect = Mat::<c64>::zeros(4, 4);
        expect[(0, 1)] = cplx(1.5, 0.0);
        expect[(1, 0)] = cplx(0.5, 0.0);
        expect[(2, 3)] = cplx(1.5, 0.0);
        expect[(3, 2)] = cplx(0.5, 0.0);
        expect[(1, 2)] = cplx(0.5, 0.0);
        expect[(2, 1)] = cplx(0.5, 0.0);
        assert_eq!(max_abs_diff(h.as_ref(), expect.as_ref()), 0.0);
    }

    #[test]
    fn single_cell_has_only_intra_couplings() {
        let x = ChainParams::new(1.0, 5.0, 1.5).unwrap();
        let y = ChainParams::new(0.0, 7.0, 9.0).unwrap();
        let m = Model2D::new(x, y, 1, 1).unwrap();
        let h = real_h2d(&m, DEFAULT_MAX_DIM).unwrap();
        let hx1 = real_h1d(&x.with_v(0.0), 1).unwrap();
        let hy1 = real_h1d(&y.with_v(0.0), 1).unwrap();
        let expect = numerics::tensor_sum(hx1.as_ref(), hy1.as_ref()).unwrap();
        assert_eq!(max_abs_diff(h.as_ref(), expect.as_ref()), 0.0);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let p = ChainParams::new(1.0, 1.0, 0.0).unwrap();
        let m = Model2D::new(p, p, 10, 10).unwrap();
        assert!(matches!(
            real_h2d(&m, 399),
            Err(Error::DimensionCap { dim: 400, cap: 399 })
        ));
    }

    #[test]
    fn zero_strength_gives_zero_matrix() {
        for spec in [DisorderSpec::chiral(0.0, 7), DisorderSpec::random(0.0, 7)] {
            let d = spec.realize(5, Axis::X).unwrap();
            assert_eq!(d.norm_max(), 0.0);
        }
    }

    #[test]
    fn chiral_disorder_anticommutes_with_gamma() {
        let d = chiral_disorder_1d(2, 0.05, 11).unwrap();
        assert!(d.norm_max() > 0.0);
        assert_eq!(chiral_defect(&d, &chiral_operator_1d(2)), 0.0);
    }

    #[test]
    fn chiral_disorder_amplitude_bound() {
        let d = chiral_disorder_1d(60, 0.05, 3).unwrap();
        assert!(d.norm_max() <= 0.025);
    }

    #[test]
    fn random_disorder_bounds_and_breaks_chirality() {
        let d = random_disorder_1d(40, 0.05, 5).unwrap();
        assert!(d.norm_max() <= 0.05);
        assert!(chiral_defect(&d, &chiral_operator_1d(40)) > 0.0);
    }

    #[test]
    fn nearest_neighbor_range_is_banded() {
        let spec = DisorderSpec::random(0.1, 9).with_range(DisorderRange::NearestNeighbor);
        let d = spec.realize(6, Axis::Y).unwrap();
        for c in 0usize..12 {
            for r in 0usize..12 {
                if (r / 2).abs_diff(c / 2) > 1 {
                    assert_eq!(d[(r, c)], cplx(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn symmetric_flag_gives_symmetric_realizations() {
        for spec in [DisorderSpec::chiral(0.3, 2), DisorderSpec::random(0.3, 2)] {
            let spec = DisorderSpec {
                symmetric: true,
                ..spec
            };
            let d = spec.realize(4, Axis::X).unwrap();
            assert_eq!(max_abs_diff(d.as_ref(), d.transpose()), 0.0);
        }
    }

    #[test]
    fn axes_draw_independent_streams() {
        let spec = DisorderSpec::random(0.1, 1);
        let dx = spec.realize(3, Axis::X).unwrap();
        let dy = spec.realize(3, Axis::Y).unwrap();
        assert!(max_abs_diff(dx.as_ref(), dy.as_ref()) > 0.0);
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for p in 0..20 {
            for r in 0..20 {
                assert!(seen.insert(derive_seed(42, p, r)));
            }
        }
        assert_eq!(derive_seed(42, 3, 4), derive_seed(42, 3, 4));
    }

    #[test]
    fn mismatched_disorder_rejected() {
        let p = ChainParams::new(1.0, 1.0, 0.0).unwrap();
        let m = Model2D::new(p, p, 2, 3).unwrap();
        let dx = Mat::<c64>::zeros(4, 4);
        let dy = Mat::<c64>::zeros(4, 4);
        assert!(matches!(
            assemble_perturbed_2d(&m, &dx, &dy, DEFAULT_MAX_DIM),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
    }

    #[test]
    fn non_finite_parameters_rejected() {
        assert!(ChainParams::new(f64::NAN, 1.0, 0.0).is_err());
        assert!(Model2D::new(
            ChainParams::new(1.0, 1.0, 0.0).unwrap(),
            ChainParams::new(1.0, 1.0, 0.0).unwrap(),
            0,
            3
        )
        .is_err());
    }
}
