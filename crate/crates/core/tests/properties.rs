use faer::Mat;
use nhsvd_core::diagnostics::{self, SeparableSpectra, SiteCoordinates};
use nhsvd_core::floquet::{self, DriveProtocol, ModeSign};
use nhsvd_core::model::{self, chiral_operator_2d, chiral_defect, real_h1d, real_h2d, DEFAULT_MAX_DIM};
use nhsvd_core::numerics::{self, cplx};
use nhsvd_core::{c64, Axis, ChainParams, ComplexDense, DisorderSpec, Model2D, SeparableHamiltonian};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain() -> impl Strategy<Value = ChainParams> {
    (-1.5f64..1.5, -2.0f64..2.0, -2.0f64..2.0)
        .prop_filter("away from exceptional points", |&(w, _, g)| {
            (w + g / 2.0).abs() > 0.3 && (w - g / 2.0).abs() > 0.3
        })
        .prop_map(|(w, v, gamma)| ChainParams { w, v, gamma })
}

fn hermitian_chain() -> impl Strategy<Value = ChainParams> {
    (-1.5f64..1.5, -2.0f64..2.0).prop_map(|(w, v)| ChainParams { w, v, gamma: 0.0 })
}

fn random_matrix(n: usize, seed: u64) -> ComplexDense {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mat::from_fn(n, n, |_, _| cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_unitary(n: usize, seed: u64) -> ComplexDense {
    numerics::svd(random_matrix(n, seed).as_ref()).unwrap().u
}

/// Greedy nearest matching of two multisets; returns the worst distance.
fn multiset_distance(a: &[c64], b: &[c64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn op_norm(m: &ComplexDense) -> f64 {
    numerics::spectral_norm(m.as_ref()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tensor_sum_spectrum(px in chain(), py in chain(), d in 0.0f64..0.1, seed in any::<u64>()) {
        for lx in 1..=6 {
            for ly in 1..=6 {
                let m = Model2D::new(px, py, lx, ly).unwrap();
                let spec = DisorderSpec::chiral(d, seed);
                let sep = SeparableHamiltonian::with_disorder(&m, Some(&spec)).unwrap();
                let h = sep.assemble(DEFAULT_MAX_DIM).unwrap();
                let dense = numerics::eigenvalues(h.as_ref()).unwrap();
                let ex = numerics::eigenvalues(sep.hx.as_ref()).unwrap();
                let ey = numerics::eigenvalues(sep.hy.as_ref()).unwrap();
                let sums: Vec<c64> = ex.iter().flat_map(|a| ey.iter().map(move |b| a + b)).collect();
                let tol = 1e-7 * (1.0 + op_norm(&h));
                let dist = multiset_distance(&dense, &sums);
                prop_assert!(dist <= tol, "lx={lx} ly={ly}: {dist:e}");
            }
        }
    }

    #[test]
    fn svd_matches_doubled_hermitian(n in 1usize..=128, seed in any::<u64>()) {
        let m = random_matrix(n, seed);
        let s = numerics::singular_values(m.as_ref()).unwrap();
        let doubled = numerics::doubled_hermitian(m.as_ref()).unwrap();
        let mut ev: Vec<f64> = numerics::eigenvalues(doubled.as_ref()).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        let tol = 1e-8 * s[0].max(1.0);
        for k in 0..n {
            prop_assert!((ev[k] - s[k]).abs() <= tol, "+s mismatch at {k}");
            prop_assert!((ev[2 * n - 1 - k] + s[k]).abs() <= tol, "-s mismatch at {k}");
        }
    }

    #[test]
    fn min_singular_matches_doubled_on_model(px in chain(), py in chain(), l in 1usize..=8) {
        let h = real_h2d(&Model2D::new(px, py, l, l.min(4)).unwrap(), 256).unwrap();
        let doubled = numerics::doubled_hermitian(h.as_ref()).unwrap();
        let min_pos = numerics::eigenvalues(doubled.as_ref()).unwrap()
            .iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
        let s = diagnostics::min_singular(&h).unwrap();
        prop_assert!((s - min_pos).abs() <= 1e-8 * (1.0 + op_norm(&h)));
    }

    #[test]
    fn weyl_bound(px in chain(), py in chain(), seed in any::<u64>(), eps in 1e-4f64..1.0) {
        let h = real_h2d(&Model2D::new(px, py, 4, 4).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let base = diagnostics::min_singular(&h).unwrap();
        for k in 0..20u64 {
            let dh = random_matrix(h.nrows(), seed ^ k) * faer::Scale(cplx(eps, 0.0));
            let perturbed = &h + &dh;
            let shifted = diagnostics::min_singular(&perturbed).unwrap();
            let bound = op_norm(&dh);
            prop_assert!((shifted - base).abs() <= bound * (1.0 + 1e-10) + 1e-13);
        }
    }

    #[test]
    fn singular_values_unitarily_invariant(px in chain(), py in chain(), seed in any::<u64>()) {
        let h = real_h2d(&Model2D::new(px, py, 3, 3).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let q1 = random_unitary(h.nrows(), seed);
        let q2 = random_unitary(h.nrows(), seed.wrapping_add(1));
        let s0 = numerics::singular_values(h.as_ref()).unwrap();
        let s1 = numerics::singular_values((&q1 * &h * &q2).as_ref()).unwrap();
        for (a, b) in s0.iter().zip(&s1) {
            prop_assert!((a - b).abs() <= 1e-10 * s0[0].max(1.0));
        }
    }

    #[test]
    fn expm_algorithms_agree(p in chain(), k in -3.2f64..3.2, t in -2.0f64..2.0) {
        let h = model::bloch_h1d(&p, k);
        let (a, b) = (numerics::expm_eig(h.as_ref(), t), numerics::expm_pade(h.as_ref(), t).unwrap());
        if let Ok(a) = a {
            let scale = 1.0 + op_norm(&b);
            prop_assert!(numerics::max_abs_diff(a.as_ref(), b.as_ref()) <= 1e-10 * scale);
        }
    }

    #[test]
    fn expm_algorithms_agree_on_chains(p in hermitian_chain(), l in 1usize..=6, t in 0.0f64..1.0) {
        let h = real_h1d(&p, l).unwrap();
        let a = numerics::expm_eig(h.as_ref(), t).unwrap();
        let b = numerics::expm_pade(h.as_ref(), t).unwrap();
        prop_assert!(numerics::max_abs_diff(a.as_ref(), b.as_ref()) <= 1e-10);
    }

    #[test]
    fn expm_group_and_determinant(p in chain(), l in 1usize..=5, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5) {
        let h = real_h1d(&p, l).unwrap();
        let e1 = numerics::expm(h.as_ref(), t1).unwrap();
        let e2 = numerics::expm(h.as_ref(), t2).unwrap();
        let e12 = numerics::expm(h.as_ref(), t1 + t2).unwrap();
        let scale = 1.0 + op_norm(&e12);
        prop_assert!(numerics::max_abs_diff((&e1 * &e2).as_ref(), e12.as_ref()) <= 1e-9 * scale);
        let det: c64 = numerics::eigenvalues(e1.as_ref()).unwrap().iter().product();
        let trace: c64 = (0..h.nrows()).map(|i| h[(i, i)]).sum();
        let expected = (cplx(0.0, -t1) * trace).exp();
        prop_assert!((det - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
    }

    #[test]
    fn commuting_split(px in chain(), py in chain(), lx in 1usize..=4, ly in 1usize..=4,
                       q in -1.0f64..1.0, t1 in 0.05f64..0.55) {
        let m = Model2D::new(px, py, lx, ly).unwrap();
        let proto = DriveProtocol::new(0.6, t1, q, q, px.v, py.v).unwrap();
        let split = floquet::evolution_operator_2d(&m, &proto, DEFAULT_MAX_DIM).unwrap();
        let direct = floquet::evolution_operator_2d_direct(&m, &proto, DEFAULT_MAX_DIM).unwrap();
        let scale = 1.0 + op_norm(&direct);
        prop_assert!(numerics::max_abs_diff(split.as_ref(), direct.as_ref()) <= 1e-8 * scale);
    }

    #[test]
    fn sign_duality(px in chain(), py in chain(), l in 1usize..=3) {
        let m = Model2D::new(px, py, l, l).unwrap();
        let proto = DriveProtocol::new(0.6, 0.3, 0.2, 0.2, px.v, py.v).unwrap();
        let u = floquet::evolution_operator_2d(&m, &proto, DEFAULT_MAX_DIM).unwrap();
        let neg = &u * faer::Scale(cplx(-1.0, 0.0));
        prop_assert_eq!(
            floquet::floquet_min_singular(&u, ModeSign::Plus).unwrap(),
            floquet::floquet_min_singular(&neg, ModeSign::Minus).unwrap()
        );
    }

    #[test]
    fn chiral_symmetry(px in chain(), py in chain(), lx in 1usize..=5, ly in 1usize..=5,
                       d in 0.0f64..0.5, seed in any::<u64>()) {
        let m = Model2D::new(px, py, lx, ly).unwrap();
        let gamma = chiral_operator_2d(lx, ly);
        let clean = real_h2d(&m, DEFAULT_MAX_DIM).unwrap();
        prop_assert!(chiral_defect(&clean, &gamma) <= 1e-14);
        let spec = DisorderSpec::chiral(d, seed);
        let h = SeparableHamiltonian::with_disorder(&m, Some(&spec)).unwrap().assemble(DEFAULT_MAX_DIM).unwrap();
        prop_assert!(chiral_defect(&h, &gamma) <= 1e-14);
    }

    #[test]
    fn hermitian_limit(px in hermitian_chain(), py in hermitian_chain(), lx in 1usize..=5, ly in 1usize..=5) {
        let h = real_h2d(&Model2D::new(px, py, lx, ly).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let ha = h.adjoint().to_owned();
        prop_assert_eq!(numerics::max_abs_diff(h.as_ref(), ha.as_ref()), 0.0);
    }

    #[test]
    fn disorder_is_deterministic(l in 1usize..=12, d in 0.0f64..1.0, seed in any::<u64>(), chiral in any::<bool>()) {
        let spec = if chiral { DisorderSpec::chiral(d, seed) } else { DisorderSpec::random(d, seed) };
        prop_assert_eq!(spec.realize(l, Axis::X).unwrap(), spec.realize(l, Axis::X).unwrap());
    }

    #[test]
    fn separable_paths_match_dense(px in chain(), py in chain(), lx in 1usize..=4, ly in 1usize..=4) {
        let m = Model2D::new(px, py, lx, ly).unwrap();
        let sep = SeparableHamiltonian::clean(&m).unwrap();
        let fast = SeparableSpectra::new(&sep).unwrap();
        let h = sep.assemble(DEFAULT_MAX_DIM).unwrap();
        let dense = numerics::eig(h.as_ref()).unwrap();
        let dense_min = dense.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        prop_assert!((fast.min_abs_energy() - dense_min).abs() <= 1e-8 * (1.0 + op_norm(&h)));
        prop_assert!(multiset_distance(&fast.values_2d(), &dense.values) <= 1e-7 * (1.0 + op_norm(&h)));
    }

    #[test]
    fn quasienergies_are_folded(px in chain(), py in chain(), l in 1usize..=3, t in 0.1f64..3.0) {
        let m = Model2D::new(px, py, l, l).unwrap();
        let proto = DriveProtocol::new(t, t / 2.0, 0.5, 0.5, px.v, py.v).unwrap();
        let (ux, uy) = floquet::evolution_factors(&m, &proto).unwrap();
        let edge = std::f64::consts::PI / t;
        for e in floquet::quasienergies_separable(&ux, &uy, t).unwrap() {
            prop_assert!(e.re > -edge && e.re <= edge);
        }
    }

    #[test]
    fn wipr_fast_path_matches_dense_when_nondegenerate(px in chain(), py in chain(), lx in 1usize..=3, ly in 1usize..=3) {
        let m = Model2D::new(px, py, lx, ly).unwrap();
        let sep = SeparableHamiltonian::clean(&m).unwrap();
        let fast = SeparableSpectra::new(&sep).unwrap();
        let vals = fast.values_2d();
        let mut gap = f64::INFINITY;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                gap = gap.min((vals[i] - vals[j]).norm());
            }
        }
        prop_assume!(gap > 1e-3);
        let dense = numerics::eig(sep.assemble(DEFAULT_MAX_DIM).unwrap().as_ref()).unwrap();
        for coords in [SiteCoordinates::Site, SiteCoordinates::Cell] {
            let a = fast.wipr(coords).unwrap();
            let b = diagnostics::wipr(&dense, lx, ly, coords).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
        }
    }
}
