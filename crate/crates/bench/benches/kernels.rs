use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhsvd_bench::{corner_hamiltonian, corner_model};
use nhsvd_core::diagnostics::SeparableSpectra;
use nhsvd_core::experiment::Scenario;
use nhsvd_core::floquet;
use nhsvd_core::invariants::real_space_winding;
use nhsvd_core::model::DEFAULT_MAX_DIM;
use nhsvd_core::numerics;
use nhsvd_core::SeparableHamiltonian;

fn svd(c: &mut Criterion) {
    let mut g = c.benchmark_group("svd");
    g.sample_size(10);
    for l in [6, 10, 14] {
        let h = corner_hamiltonian(1.5, l);
        g.bench_with_input(BenchmarkId::new("singular_values", 4 * l * l), &h, |b, h| {
            b.iter(|| numerics::singular_values(h.as_ref()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("full", 4 * l * l), &h, |b, h| {
            b.iter(|| numerics::svd(h.as_ref()).unwrap())
        });
    }
    g.finish();
}

fn expm(c: &mut Criterion) {
    let mut g = c.benchmark_group("expm");
    for l in [4, 8] {
        let h = corner_hamiltonian(1.5, l);
        g.bench_with_input(BenchmarkId::new("pade", h.nrows()), &h, |b, h| {
            b.iter(|| numerics::expm_pade(h.as_ref(), 0.3).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("eig", h.nrows()), &h, |b, h| {
            b.iter(|| numerics::expm_eig(h.as_ref(), 0.3).unwrap())
        });
    }
    g.finish();
}

fn winding(c: &mut Criterion) {
    let mut g = c.benchmark_group("real_space_winding");
    g.sample_size(10);
    for l in [6, 10] {
        let h = corner_hamiltonian(1.5, l);
        g.bench_with_input(BenchmarkId::from_parameter(l), &h, |b, h| {
            b.iter(|| real_space_winding(h, l, l).unwrap())
        });
    }
    g.finish();
}

fn separable(c: &mut Criterion) {
    let mut g = c.benchmark_group("separable_spectra");
    g.sample_size(10);
    let cfg = Scenario::Fig2b.preset();
    for l in [60, 200] {
        let m = cfg.model.build(cfg.model.vx, l, l).unwrap();
        let sep = SeparableHamiltonian::clean(&m).unwrap();
        g.bench_with_input(BenchmarkId::new("min_abs_energy", l), &sep, |b, sep| {
            b.iter(|| SeparableSpectra::new(sep).unwrap().min_abs_energy())
        });
    }
    g.finish();
}

fn propagator(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagator");
    g.sample_size(10);
    let drive = Scenario::Fig4.preset().drive.unwrap();
    for l in [4, 8] {
        let m = corner_model(1.7, l);
        let proto = drive.protocol(m.x.v, m.y.v).unwrap();
        g.bench_with_input(BenchmarkId::new("split", l), &m, |b, m| {
            b.iter(|| floquet::evolution_operator_2d(m, &proto, DEFAULT_MAX_DIM).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, svd, expm, winding, separable, propagator);
criterion_main!(benches);
