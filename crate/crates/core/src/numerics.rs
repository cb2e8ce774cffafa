//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `faer::Mat<c64>`; decompositions are delegated to faer and
//! wrapped so that callers get unit-normalized eigenvectors, descending
//! singular values and explicit errors instead of panics.

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Dense complex matrix, column-major.
pub type ComplexDense = Mat<c64>;

/// Default relative tolerance for decomposition contracts.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Eigenvector condition number above which `expm` avoids the
/// eigendecomposition route.
pub const EXPM_EIGEN_KAPPA_LIMIT: f64 = 1e6;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
#[cfg(test)]
const ONE: c64 = c64 { re: 1.0, im: 0.0 };

pub fn cplx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

pub fn identity(n: usize) -> ComplexDense {
    Mat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexDense {
    Mat::zeros(rows, cols)
}

pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> ComplexDense {
    a.kron(b)
}

/// `a ⊗ 𝕀(b) + 𝕀(a) ⊗ b`, built directly without forming either Kronecker product.
pub fn tensor_sum(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Result<ComplexDense> {
    ensure_square(a)?;
    ensure_square(b)?;
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = Mat::zeros(na * nb, na * nb);
    for ca in 0..na {
        for ra in 0..na {
            let x = a[(ra, ca)];
            if x != ZERO {
                for k in 0..nb {
                    out[(ra * nb + k, ca * nb + k)] += x;
                }
            }
        }
    }
    for blk in 0..na {
        for cb in 0..nb {
            for rb in 0..nb {
                let y = b[(rb, cb)];
                if y != ZERO {
                    out[(blk * nb + rb, blk * nb + cb)] += y;
                }
            }
        }
    }
    Ok(out)
}

/// Hermitian block matrix `[[0, M], [M†, 0]]`; its spectrum is `±` the singular values of `M`.
pub fn doubled_hermitian(m: MatRef<'_, c64>) -> Result<ComplexDense> {
    ensure_square(m)?;
    let n = m.nrows();
    Ok(Mat::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, false) => m[(r, c - n)],
        (false, true) => m[(c, r - n)].conj(),
        _ => ZERO,
    }))
}

pub fn ensure_square(m: MatRef<'_, c64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub fn ensure_finite(m: MatRef<'_, c64>, what: &'static str) -> Result<()> {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(what));
            }
        }
    }
    Ok(())
}

/// Largest absolute entry difference.
pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut worst = 0.0f64;
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            worst = worst.max((a[(r, c)] - b[(r, c)]).norm());
        }
    }
    worst
}

pub fn frobenius_norm(m: MatRef<'_, c64>) -> f64 {
    m.norm_l2()
}

/// Operator 2-norm (largest singular value).
pub fn spectral_norm(m: MatRef<'_, c64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Right eigenpairs of a general complex matrix.
#[derive(Clone, Debug)]
pub struct EigResult {
    pub values: Vec<c64>,
    /// Unit 2-norm columns; column `i` pairs with `values[i]`.
    pub vectors: ComplexDense,
}

impl EigResult {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `max_i ‖M vᵢ − λᵢ vᵢ‖`.
    pub fn residual(&self, m: MatRef<'_, c64>) -> f64 {
        let mv = m * &self.vectors;
        let mut worst = 0.0f64;
        for (j, &lambda) in self.values.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..self.dim() {
                acc += (mv[(i, j)] - lambda * self.vectors[(i, j)]).norm_sqr();
            }
            worst = worst.max(acc.sqrt());
        }
        worst
    }
}

pub fn eig(m: MatRef<'_, c64>) -> Result<EigResult> {
    ensure_square(m)?;
    ensure_finite(m, "eig input")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(EigResult {
            values: Vec::new(),
            vectors: Mat::zeros(0, 0),
        });
    }
    let evd = m.eigen().map_err(|_| Error::NonConvergence {
        routine: "eigendecomposition",
        dim: n,
    })?;
    let values: Vec<c64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut vectors = evd.U().to_owned();
    normalize_columns(&mut vectors);
    Ok(EigResult { values, vectors })
}

pub fn eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    ensure_square(m)?;
    ensure_finite(m, "eigenvalue input")?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.eigenvalues().map_err(|_| Error::NonConvergence {
        routine: "eigenvalues",
        dim: m.nrows(),
    })
}

fn normalize_columns(v: &mut ComplexDense) {
    for j in 0..v.ncols() {
        let norm = v.col(j).norm_l2();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for i in 0..v.nrows() {
                v[(i, j)] *= inv;
            }
        }
    }
}

/// `M = U · diag(s) · V†` with `s` sorted descending.
#[derive(Clone, Debug)]
pub struct SvdTriple {
    pub u: ComplexDense,
    pub s: Vec<f64>,
    pub v: ComplexDense,
}

impl SvdTriple {
    pub fn min_singular(&self) -> f64 {
        self.s.last().copied().unwrap_or(0.0)
    }

    pub fn max_singular(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Singular values in ascending order.
    pub fn ascending(&self) -> Vec<f64> {
        let mut s = self.s.clone();
        s.reverse();
        s
    }

    pub fn reconstruct(&self) -> ComplexDense {
        let mut us = self.u.clone();
        for (j, &sj) in self.s.iter().enumerate() {
            for i in 0..us.nrows() {
                us[(i, j)] *= sj;
            }
        }
        &us * self.v.adjoint()
    }
}

/// Full SVD, computed on `M` itself (never through `M†M`).
pub fn svd(m: MatRef<'_, c64>) -> Result<SvdTriple> {
    ensure_finite(m, "svd input")?;
    let dim = m.nrows().max(m.ncols());
    let dec = m.svd().map_err(|_| Error::NonConvergence {
        routine: "svd",
        dim,
    })?;
    let k = m.nrows().min(m.ncols());
    let s = (0..k).map(|i| dec.S()[i].re).collect();
    Ok(SvdTriple {
        u: dec.U().to_owned(),
        s,
        v: dec.V().to_owned(),
    })
}

/// Singular values only, descending.
pub fn singular_values(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    ensure_finite(m, "singular value input")?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values().map_err(|_| Error::NonConvergence {
        routine: "singular values",
        dim: m.nrows().max(m.ncols()),
    })
}

/// 2-norm condition number `s_max / s_min`; `+inf` when `s_min` underflows to zero.
pub fn matrix_condition_number(m: MatRef<'_, c64>) -> Result<f64> {
    let s = singular_values(m)?;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

/// Which algorithm `expm` ended up using.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpmMethod {
    Eigen,
    Pade,
}

/// `e^{−i·M·t}`.
///
/// Goes through the eigendecomposition when the eigenvector matrix is well
/// conditioned (κ < [`EXPM_EIGEN_KAPPA_LIMIT`]) and through Padé-13 scaling and
/// squaring otherwise.
pub fn expm(m: MatRef<'_, c64>, t: f64) -> Result<ComplexDense> {
    expm_with_method(m, t).map(|(e, _)| e)
}

pub fn expm_with_method(m: MatRef<'_, c64>, t: f64) -> Result<(ComplexDense, ExpmMethod)> {
    ensure_square(m)?;
    ensure_finite(m, "expm input")?;
    let n = m.nrows();
    if t == 0.0 || n == 0 {
        return Ok((identity(n), ExpmMethod::Eigen));
    }
    let dec = eig(m)?;
    let kappa = matrix_condition_number(dec.vectors.as_ref())?;
    if kappa < EXPM_EIGEN_KAPPA_LIMIT {
        if let Ok(e) = expm_from_eig(&dec, t) {
            return Ok((e, ExpmMethod::Eigen));
        }
    }
    expm_pade(m, t).map(|e| (e, ExpmMethod::Pade))
}

/// `e^{−iMt}` through `V · diag(e^{−iλt}) · V⁻¹`. Only accurate for well-conditioned `V`.
pub fn expm_eig(m: MatRef<'_, c64>, t: f64) -> Result<ComplexDense> {
    ensure_square(m)?;
    expm_from_eig(&eig(m)?, t)
}

fn expm_from_eig(dec: &EigResult, t: f64) -> Result<ComplexDense> {
    let n = dec.dim();
    let mut vd = dec.vectors.clone();
    for (j, &lambda) in dec.values.iter().enumerate() {
        let phase = (cplx(0.0, -t) * lambda).exp();
        for i in 0..n {
            vd[(i, j)] *= phase;
        }
    }
    let inv = dec.vectors.partial_piv_lu().inverse();
    let out = &vd * &inv;
    ensure_finite(out.as_ref(), "eigen-route exponential")?;
    Ok(out)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// `e^{−iMt}` by Padé-13 scaling and squaring (Higham 2005).
pub fn expm_pade(m: MatRef<'_, c64>, t: f64) -> Result<ComplexDense> {
    ensure_square(m)?;
    ensure_finite(m, "expm input")?;
    let n = m.nrows();
    let scale_in = cplx(0.0, -t);
    let a = Mat::from_fn(n, n, |i, j| m[(i, j)] * scale_in);
    let norm1 = one_norm(a.as_ref());
    if !norm1.is_finite() {
        return Err(Error::ExpmOverflow { scaled_norm: norm1 });
    }
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if squarings > 1000 {
        return Err(Error::ExpmOverflow { scaled_norm: norm1 });
    }
    let s = 0.5f64.powi(squarings);
    let a = Mat::from_fn(n, n, |i, j| a[(i, j)] * s);

    let eye = identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = PADE13;
    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| {
        Mat::from_fn(n, n, |i, j| {
            a6[(i, j)] * c6 + a4[(i, j)] * c4 + a2[(i, j)] * c2 + eye[(i, j)] * c0
        })
    };
    let u_inner = &a6 * lin(b[13], b[11], b[9], 0.0) + lin(b[7], b[5], b[3], b[1]);
    let u = &a * &u_inner;
    let v = &a6 * lin(b[12], b[10], b[8], 0.0) + lin(b[6], b[4], b[2], b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if ensure_finite(r.as_ref(), "pade exponential").is_err() {
        return Err(Error::ExpmOverflow {
            scaled_norm: norm1,
        });
    }
    Ok(r)
}

fn one_norm(m: MatRef<'_, c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Result of `(1/4πi)·Tr ln M` for a matrix with unimodular spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogTrace {
    /// `(1/4π)·Σ arg λ`, principal branch.
    pub value: f64,
    /// `−(1/4π)·Σ ln|λ|`, discarded from `value`.
    pub imaginary_residue: f64,
    /// `max | |λ| − 1 |`.
    pub modulus_deviation: f64,
}

/// `(1/4πi)·Tr ln M` evaluated as a spectral sum with the principal branch.
///
/// Errors with [`Error::NotUnimodular`] when some eigenvalue lies farther than
/// `tol` from the unit circle.
pub fn unitary_log_trace(m: MatRef<'_, c64>, tol: f64) -> Result<LogTrace> {
    ensure_square(m)?;
    let values = if unitarity_defect(m) <= tol.max(1e-12) {
        unitary_eigenvalues(m)?
    } else {
        eigenvalues(m)?
    };
    log_trace_of_spectrum(&values, tol)
}

pub fn log_trace_of_spectrum(values: &[c64], tol: f64) -> Result<LogTrace> {
    let mut arg_sum = 0.0;
    let mut log_mod_sum = 0.0;
    let mut deviation = 0.0f64;
    for &z in values {
        let r = z.norm();
        deviation = deviation.max((r - 1.0).abs());
        arg_sum += principal_arg(z);
        log_mod_sum += r.ln();
    }
    if deviation > tol {
        return Err(Error::NotUnimodular { deviation });
    }
    let four_pi = 4.0 * std::f64::consts::PI;
    Ok(LogTrace {
        value: arg_sum / four_pi,
        imaginary_residue: -log_mod_sum / four_pi,
        modulus_deviation: deviation,
    })
}

/// Argument in `(−π, π]`.
pub fn principal_arg(z: c64) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// `max |(M M† − 𝕀)_{ij}|`.
pub fn unitarity_defect(m: MatRef<'_, c64>) -> f64 {
    let mm = m * m.adjoint();
    max_abs_diff(mm.as_ref(), identity(m.nrows()).as_ref())
}

/// Eigenvalues of a (numerically) unitary matrix.
///
/// A normal matrix shares eigenvectors with its Hermitian part, so the
/// Hermitian eigensolver does most of the work. Eigenvalues are recovered as
/// Rayleigh quotients; clusters of nearly equal `Re λ` (which a Hermitian part
/// cannot separate, e.g. `e^{±iθ}`) are resolved by a small general eigensolve
/// on the cluster block.
pub fn unitary_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    ensure_square(m)?;
    ensure_finite(m, "unitary eigenvalue input")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let half = cplx(0.5, 0.0);
    let herm = Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * half);
    let evd = herm
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NonConvergence {
            routine: "self-adjoint eigendecomposition",
            dim: n,
        })?;
    let w = evd.U();
    let cosines: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
    let mw = m * w;

    const CLUSTER_GAP: f64 = 1e-8;
    let mut values = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] < CLUSTER_GAP {
            end += 1;
        }
        if end - start == 1 {
            let mut q = ZERO;
            for i in 0..n {
                q += w[(i, start)].conj() * mw[(i, start)];
            }
            values.push(q);
        } else {
            let block_w = w.subcols(start, end - start);
            let block_mw = mw.subcols(start, end - start);
            let block = block_w.adjoint() * block_mw;
            values.extend(eigenvalues(block.as_ref())?);
        }
        start = end;
    }
    Ok(values)
}
