use bisim_core::random::random_mdp;
use bisim_core::{fixed_point_metric, metric_step, toy_mdp, value_iteration, MetricMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn step_random(c: &mut Criterion) {
    let mut group = c.benchmark_group("metric_step_random");
    for &n in &[6usize, 12, 24] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mdp = random_mdp(&mut rng, n, 2);
        let h = fixed_point_metric(&mdp, 0.5, 1e-3).unwrap().metric;
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| metric_step(black_box(&mdp), 0.5, black_box(&h)).unwrap())
        });
    }
    group.finish();
}

fn toy_fixed_point(c: &mut Criterion) {
    let mut group = c.benchmark_group("toy_fixed_point");
    group.sample_size(10);
    for &n in &[10usize, 100] {
        let mdp = toy_mdp(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| fixed_point_metric(black_box(&mdp), 0.9, 1e-6).unwrap())
        });
    }
    group.finish();
}

fn toy_step(c: &mut Criterion) {
    let mdp = toy_mdp(200).unwrap();
    let h = MetricMatrix::zeros(200);
    c.bench_function("toy_step_200", |b| {
        b.iter(|| metric_step(black_box(&mdp), 0.5, black_box(&h)).unwrap())
    });
    c.bench_function("toy_values_200", |b| {
        b.iter(|| value_iteration(black_box(&mdp), 0.5, 1e-9).unwrap())
    });
}

criterion_group!(benches, step_random, toy_fixed_point, toy_step);
criterion_main!(benches);
