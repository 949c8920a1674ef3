use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qfm_core::entanglement::bell_doubled_circuit;
use qfm_core::{
    analytical_spectrum, dft_spectrum, sample_parameters, statevector, AnsatzKind, Model, ModelConfig, NoiseParams,
    SeedStream,
};

fn model(kind: AnsatzKind, n: usize, layers: usize) -> Model {
    Model::new(ModelConfig::new(kind, n, layers)).unwrap()
}

fn bench_statevector(c: &mut Criterion) {
    let mut group = c.benchmark_group("statevector");
    for n in [4, 8, 12] {
        let m = model(AnsatzKind::StronglyEntangling, n, 2);
        let p = sample_parameters(&m.circuit, 1, &SeedStream::new(1)).unwrap().remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| statevector(&m.circuit, black_box(p.as_slice()), 0.3).unwrap())
        });
    }
    group.finish();
}

fn bench_spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for kind in [
        AnsatzKind::HardwareEfficient,
        AnsatzKind::Circuit19,
        AnsatzKind::StronglyEntangling,
    ] {
        let m = model(kind, 4, 1);
        let p = sample_parameters(&m.circuit, 1, &SeedStream::new(2)).unwrap().remove(0);
        group.bench_function(BenchmarkId::new("dft", kind.name()), |b| {
            b.iter(|| dft_spectrum(&m, black_box(&p), None, &SeedStream::new(0)).unwrap())
        });
        group.bench_function(BenchmarkId::new("analytical", kind.name()), |b| {
            b.iter(|| analytical_spectrum(&m, black_box(&p)).unwrap())
        });
    }
    group.finish();
}

fn bench_noisy(c: &mut Criterion) {
    let noise = NoiseParams {
        p_dp: 0.01,
        p_ad: 0.02,
        p_me: 0.01,
        t1: 100.0,
        t2: 80.0,
        t_factor: 1.0,
        ..Default::default()
    };
    let m = Model::new(ModelConfig::new(AnsatzKind::HardwareEfficient, 4, 1).with_noise(noise)).unwrap();
    let p = sample_parameters(&m.circuit, 1, &SeedStream::new(3)).unwrap().remove(0);
    c.bench_function("noisy_density_evaluate_n4", |b| {
        b.iter(|| {
            let mut rng = SeedStream::new(0).rng(qfm_core::rng::Purpose::GateError, 0);
            m.evaluate(black_box(&p), 0.7, &mut rng).unwrap()
        })
    });
}

fn bench_bell(c: &mut Criterion) {
    let m = model(AnsatzKind::Circuit6, 4, 1);
    let doubled = bell_doubled_circuit(&m.circuit);
    let p = sample_parameters(&m.circuit, 1, &SeedStream::new(4)).unwrap().remove(0);
    c.bench_function("bell_doubled_statevector_n4", |b| {
        b.iter(|| statevector(&doubled, black_box(p.as_slice()), 0.0).unwrap())
    });
}

criterion_group!(benches, bench_statevector, bench_spectra, bench_noisy, bench_bell);
criterion_main!(benches);
