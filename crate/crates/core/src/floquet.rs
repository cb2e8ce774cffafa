//! Two-stage periodic drive of the inter-cell hoppings, one-period
//! propagators, quasienergies and the 0/π-mode diagnostics built on `U(T) ∓ 𝕀`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, ZeroModeCount, ZeroModePolicy};
use crate::error::{Error, Result};
use crate::invariants::{self, PhaseLayout, RealSpaceWinding};
use crate::model::{real_h1d, real_h2d, Axis, ChainParams, Model2D};
use crate::numerics::{self, c64, cplx, ComplexDense};

/// Piecewise-constant drive: `v(t) = f` on `[mT, mT + T1)`, `q·f` on `[mT + T1, (m+1)T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveProtocol {
    pub period: f64,
    pub first_duration: f64,
    pub qx: f64,
    pub qy: f64,
    pub fx: f64,
    pub fy: f64,
}

impl DriveProtocol {
    pub fn new(period: f64, first_duration: f64, qx: f64, qy: f64, fx: f64, fy: f64) -> Result<Self> {
        let p = DriveProtocol {
            period,
            first_duration,
            qx,
            qy,
            fx,
            fy,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.period, self.first_duration, self.qx, self.qy, self.fx, self.fy];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("drive parameters must be finite".into()));
        }
        if self.period <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "drive period must be positive, got {}",
                self.period
            )));
        }
        if !(self.first_duration > 0.0 && self.first_duration < self.period) {
            return Err(Error::InvalidInput(format!(
                "first segment duration {} must lie in (0, {})",
                self.first_duration, self.period
            )));
        }
        Ok(())
    }

    pub fn second_duration(&self) -> f64 {
        self.period - self.first_duration
    }

    pub fn with_amplitudes(self, fx: f64, fy: f64) -> Self {
        DriveProtocol { fx, fy, ..self }
    }

    /// `(f, q)` along an axis.
    pub fn axis(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.fx, self.qx),
            Axis::Y => (self.fy, self.qy),
        }
    }
}

/// Inter-cell amplitude at time `t`.
pub fn drive_value(proto: &DriveProtocol, axis: Axis, t: f64) -> f64 {
    let (f, q) = proto.axis(axis);
    let tau = t.rem_euclid(proto.period);
    if tau < proto.first_duration {
        f
    } else {
        q * f
    }
}

/// `U(T) = e^{−iH[q·f]·T2} · e^{−iH[f]·T1}` for one open chain. The
/// inter-cell amplitude of `p` is replaced by the drive.
pub fn evolution_operator_1d(
    p: &ChainParams,
    proto: &DriveProtocol,
    axis: Axis,
    l: usize,
) -> Result<ComplexDense> {
    proto.validate()?;
    let (f, q) = proto.axis(axis);
    let h1 = real_h1d(&p.with_v(f), l)?;
    let h2 = real_h1d(&p.with_v(q * f), l)?;
    let u1 = numerics::expm(h1.as_ref(), proto.first_duration)?;
    let u2 = numerics::expm(h2.as_ref(), proto.second_duration())?;
    Ok(&u2 * &u1)
}

/// Both 1D propagators of a driven model.
pub fn evolution_factors(m: &Model2D, proto: &DriveProtocol) -> Result<(ComplexDense, ComplexDense)> {
    m.validate()?;
    let ux = evolution_operator_1d(&m.x, proto, Axis::X, m.lx)?;
    let uy = evolution_operator_1d(&m.y, proto, Axis::Y, m.ly)?;
    Ok((ux, uy))
}

/// `U(T) = Ux(T) ⊗ Uy(T)`.
pub fn evolution_operator_2d(m: &Model2D, proto: &DriveProtocol, max_dim: usize) -> Result<ComplexDense> {
    m.check_dim(max_dim)?;
    let (ux, uy) = evolution_factors(m, proto)?;
    Ok(numerics::kron(ux.as_ref(), uy.as_ref()))
}

/// Time-ordered product built from the full 2D Hamiltonians of both segments.
pub fn evolution_operator_2d_direct(
    m: &Model2D,
    proto: &DriveProtocol,
    max_dim: usize,
) -> Result<ComplexDense> {
    proto.validate()?;
    let first = Model2D {
        x: m.x.with_v(proto.fx),
        y: m.y.with_v(proto.fy),
        ..*m
    };
    let second = Model2D {
        x: m.x.with_v(proto.qx * proto.fx),
        y: m.y.with_v(proto.qy * proto.fy),
        ..*m
    };
    let u1 = numerics::expm(real_h2d(&first, max_dim)?.as_ref(), proto.first_duration)?;
    let u2 = numerics::expm(real_h2d(&second, max_dim)?.as_ref(), proto.second_duration())?;
    Ok(&u2 * &u1)
}

/// `(i/T)·ln λ` with the real part folded into `(−π/T, π/T]`.
pub fn quasienergy(lambda: c64, period: f64) -> Result<c64> {
    let r = lambda.norm();
    if r < f64::MIN_POSITIVE || !r.is_finite() {
        return Err(Error::DefectivePropagator(r));
    }
    let mut phi = numerics::principal_arg(lambda);
    if phi == PI {
        phi = -PI;
    }
    Ok(cplx(-phi / period, r.ln() / period))
}

pub fn quasienergies(u: &ComplexDense, period: f64) -> Result<Vec<c64>> {
    numerics::eigenvalues(u.as_ref())?
        .into_iter()
        .map(|l| quasienergy(l, period))
        .collect()
}

/// Quasienergies of `Ux ⊗ Uy` from the eigenvalue products of the factors.
pub fn quasienergies_separable(ux: &ComplexDense, uy: &ComplexDense, period: f64) -> Result<Vec<c64>> {
    let lx = numerics::eigenvalues(ux.as_ref())?;
    let ly = numerics::eigenvalues(uy.as_ref())?;
    let mut out = Vec::with_capacity(lx.len() * ly.len());
    for a in &lx {
        for b in &ly {
            out.push(quasienergy(a * b, period)?);
        }
    }
    Ok(out)
}

/// `(min |ε|, min |ε ∓ π/T|)`.
pub fn quasienergy_gaps(eps: &[c64], period: f64) -> (f64, f64) {
    let edge = PI / period;
    let mut g0 = f64::INFINITY;
    let mut gpi = f64::INFINITY;
    for e in eps {
        g0 = g0.min(e.norm());
        gpi = gpi
            .min((e - cplx(edge, 0.0)).norm())
            .min((e + cplx(edge, 0.0)).norm());
    }
    (g0, gpi)
}

/// Sign of the auxiliary operator `U + sign·𝕀`; `Minus` probes 0-modes, `Plus` π-modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSign {
    Minus,
    Plus,
}

impl ModeSign {
    pub fn value(self) -> f64 {
        match self {
            ModeSign::Minus => -1.0,
            ModeSign::Plus => 1.0,
        }
    }
}

/// `U + sign·𝕀`.
pub fn shifted(u: &ComplexDense, sign: ModeSign) -> Result<ComplexDense> {
    numerics::ensure_square(u.as_ref())?;
    let mut m = u.clone();
    let s = cplx(sign.value(), 0.0);
    for i in 0..m.nrows() {
        m[(i, i)] += s;
    }
    Ok(m)
}

pub fn floquet_min_singular(u: &ComplexDense, sign: ModeSign) -> Result<f64> {
    diagnostics::min_singular(&shifted(u, sign)?)
}

pub fn floquet_winding(u: &ComplexDense, lx: usize, ly: usize, sign: ModeSign) -> Result<RealSpaceWinding> {
    invariants::real_space_winding(&shifted(u, sign)?, lx, ly)
}

/// Singular diagnostics of `U + sign·𝕀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDiagnostics {
    pub min_s: f64,
    pub winding: RealSpaceWinding,
    pub zero_modes: ZeroModeCount,
    pub near_transition: bool,
}

pub fn mode_diagnostics(
    u: &ComplexDense,
    lx: usize,
    ly: usize,
    sign: ModeSign,
    policy: ZeroModePolicy,
) -> Result<ModeDiagnostics> {
    let dec = numerics::svd(shifted(u, sign)?.as_ref())?;
    let asc = dec.ascending();
    let winding = invariants::winding_from_svd(&dec, &invariants::basis_phases(lx, ly, PhaseLayout::CellResolved))?;
    let zero_modes = diagnostics::classify_zero_modes(&asc, dec.max_singular(), policy);
    Ok(ModeDiagnostics {
        min_s: dec.min_singular(),
        winding,
        near_transition: diagnostics::near_transition(&asc, zero_modes.count),
        zero_modes,
    })
}

#[derive(Clone, Debug)]
pub struct FloquetResult {
    pub u: ComplexDense,
    /// Real parts folded into `(−π/T, π/T]`.
    pub quasienergies: Vec<c64>,
    pub minus: ModeDiagnostics,
    pub plus: ModeDiagnostics,
    pub quasienergy_gap_0: f64,
    pub quasienergy_gap_pi: f64,
}

impl FloquetResult {
    pub fn min_s_minus(&self) -> f64 {
        self.minus.min_s
    }

    pub fn min_s_plus(&self) -> f64 {
        self.plus.min_s
    }

    pub fn v_minus(&self) -> f64 {
        self.minus.winding.value
    }

    pub fn v_plus(&self) -> f64 {
        self.plus.winding.value
    }
}

/// Full 0/π analysis of a driven model.
pub fn analyze(
    m: &Model2D,
    proto: &DriveProtocol,
    policy: ZeroModePolicy,
    max_dim: usize,
) -> Result<FloquetResult> {
    m.check_dim(max_dim)?;
    let (ux, uy) = evolution_factors(m, proto)?;
    let quasienergies = quasienergies_separable(&ux, &uy, proto.period)?;
    let (quasienergy_gap_0, quasienergy_gap_pi) = quasienergy_gaps(&quasienergies, proto.period);
    let u = numerics::kron(ux.as_ref(), uy.as_ref());
    let minus = mode_diagnostics(&u, m.lx, m.ly, ModeSign::Minus, policy)?;
    let plus = mode_diagnostics(&u, m.lx, m.ly, ModeSign::Plus, policy)?;
    Ok(FloquetResult {
        u,
        quasienergies,
        minus,
        plus,
        quasienergy_gap_0,
        quasienergy_gap_pi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_MAX_DIM;
    use faer::Mat;

    fn fig4_proto(vx: f64) -> DriveProtocol {
        DriveProtocol::new(0.6, 0.3, 0.2, 0.2, vx, 7.0 * vx).unwrap()
    }

    #[test]
    fn drive_value_examples() {
        let p = DriveProtocol::new(0.6, 0.3, 0.2, 0.2, 7.0, 7.0).unwrap();
        assert_eq!(drive_value(&p, Axis::X, 0.1), 7.0);
        assert!((drive_value(&p, Axis::X, 0.3) - 1.4).abs() < 1e-15);
        assert!((drive_value(&p, Axis::X, 0.9) - 1.4).abs() < 1e-15);
    }

    #[test]
    fn protocol_validation() {
        assert!(DriveProtocol::new(0.6, 0.6, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(DriveProtocol::new(0.0, 0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(DriveProtocol::new(0.6, 0.3, f64::NAN, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn tiny_period_is_identity() {
        let p = ChainParams::new(1.0, 0.0, 1.5).unwrap();
        let proto = DriveProtocol::new(1e-9, 0.5e-9, 0.2, 0.2, 1.3, 1.3).unwrap();
        let u = evolution_operator_1d(&p, &proto, Axis::X, 6).unwrap();
        assert!(numerics::max_abs_diff(u.as_ref(), numerics::identity(12).as_ref()) < 1e-6);
    }

    #[test]
    fn undriven_limit_matches_static_propagator() {
        let p = ChainParams::new(1.0, 0.0, 1.5).unwrap();
        let proto = DriveProtocol::new(0.6, 0.25, 1.0, 1.0, 1.7, 1.7).unwrap();
        let u = evolution_operator_1d(&p, &proto, Axis::X, 5).unwrap();
        let h = real_h1d(&p.with_v(1.7), 5).unwrap();
        let e = numerics::expm(h.as_ref(), 0.6).unwrap();
        assert!(numerics::max_abs_diff(u.as_ref(), e.as_ref()) < 1e-9);
    }

    #[test]
    fn separable_matches_direct_product() {
        let m = Model2D::new(
            ChainParams::new(1.0, 0.0, 1.5).unwrap(),
            ChainParams::new(0.0, 0.0, 10.5).unwrap(),
            2,
            2,
        )
        .unwrap();
        let proto = fig4_proto(1.6);
        let a = evolution_operator_2d(&m, &proto, DEFAULT_MAX_DIM).unwrap();
        let b = evolution_operator_2d_direct(&m, &proto, DEFAULT_MAX_DIM).unwrap();
        assert!(numerics::max_abs_diff(a.as_ref(), b.as_ref()) < 1e-8);
    }

    #[test]
    fn quasienergy_examples() {
        let eps = quasienergies(&numerics::identity(3), 1.0).unwrap();
        assert!(eps.iter().all(|e| e.norm() < 1e-15));
        let mut u = Mat::<c64>::zeros(2, 2);
        u[(0, 0)] = cplx((-PI).cos(), (-PI).sin());
        u[(1, 1)] = cplx(0.0, 1.0);
        let mut eps = quasienergies(&u, 1.0).unwrap();
        eps.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((eps[0].re + PI / 2.0).abs() < 1e-12);
        assert!((eps[1].re - PI).abs() < 1e-12);
        assert!(matches!(
            quasienergy(cplx(0.0, 0.0), 1.0),
            Err(Error::DefectivePropagator(_))
        ));
    }

    #[test]
    fn identity_auxiliary_operators() {
        let u = numerics::identity(4);
        assert!(floquet_min_singular(&u, ModeSign::Minus).unwrap() < 1e-15);
        assert!((floquet_min_singular(&u, ModeSign::Plus).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaps_measure_distance_to_zero_and_edge() {
        let (g0, gpi) = quasienergy_gaps(&[cplx(0.5, 0.0), cplx(-3.0, 0.0)], 1.0);
        assert!((g0 - 0.5).abs() < 1e-15);
        assert!((gpi - (PI - 3.0)).abs() < 1e-15);
    }
}
