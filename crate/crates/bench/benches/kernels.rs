//! Benchmarks of the numerical kernels: operator assembly, the dense
//! Hermitian eigensolver, spectral Fisher information, rotated outcome
//! distributions, the inequality suite, and the end-to-end estimation loop.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinlab_core::{
    collective_spin, hermitian_eig, mle_estimate, outcome_distribution, qfi_spectral, toth_check,
    CounterRng, Direction, PureState, State,
};

fn skew_direction() -> Direction {
    Direction::new(0.6, 0.48, 0.64).unwrap()
}

fn operator_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("collective_spin");
    for &n in &[16usize, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(collective_spin(black_box(n), skew_direction())))
        });
    }
    group.finish();
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for &n in &[16usize, 64] {
        let op = collective_spin(n, skew_direction());
        group.bench_with_input(BenchmarkId::from_parameter(n), op.matrix(), |b, m| {
            b.iter(|| hermitian_eig(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn spectral_information(c: &mut Criterion) {
    let mut group = c.benchmark_group("qfi_spectral");
    for &n in &[16usize, 64] {
        let mut rng = CounterRng::new(9 + n as u64);
        let rho = rng.next_density(n, 3);
        let op = collective_spin(n, Direction::y_axis());
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| qfi_spectral(black_box(&rho), black_box(&op)).unwrap())
        });
    }
    group.finish();
}

fn rotated_distribution(c: &mut Criterion) {
    let state = State::Pure(PureState::number_state(64, 32).unwrap());
    c.bench_function("outcome_distribution/n=64", |b| {
        b.iter(|| {
            outcome_distribution(black_box(&state), Direction::y_axis(), black_box(0.3)).unwrap()
        })
    });
}

fn inequality_suite(c: &mut Criterion) {
    let mut rng = CounterRng::new(7);
    let state = State::Mixed(rng.next_diagonal_mixture(64).to_density());
    let triplet = rng.next_triplet();
    c.bench_function("toth_check/n=64", |b| {
        b.iter(|| toth_check(black_box(&state), black_box(&triplet)).unwrap())
    });
}

fn estimation_loop(c: &mut Criterion) {
    let state = State::Pure(PureState::number_state(10, 5).unwrap());
    c.bench_function("mle_estimate/n=10_shots=50_reps=5", |b| {
        b.iter(|| {
            mle_estimate(
                black_box(&state),
                Direction::y_axis(),
                0.3,
                50,
                5,
                20260816,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    operator_assembly,
    eigensolver,
    spectral_information,
    rotated_distribution,
    inequality_suite,
    estimation_loop
);
criterion_main!(benches);
