//! Throughput of the kernels that dominate the suite runtime: dense
//! eigendecomposition, Kronecker products, a single see-saw restart, one
//! invariant-sector boundary solve, and the exact permutation-test circuit.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use entlab_core::linalg::{haar_random_unitary, random_state_amplitudes};
use entlab_core::povm::{permutation_test, TestMode};
use entlab_core::rng::rng_from;
use entlab_core::sdp::{invariant_boundary_point, PptFamily};
use entlab_core::seesaw::{max_product_overlap, SeesawConfig};
use entlab_core::witness::build_witnesses;
use entlab_core::{Operator, StateVector};

fn bench_eig(c: &mut Criterion) {
    let w = build_witnesses(4).unwrap().minus;
    c.bench_function("eig witness d=4 (dim 64)", |b| {
        b.iter(|| black_box(&w).eig().unwrap())
    });
}

fn bench_kron(c: &mut Criterion) {
    let mut rng = rng_from(11);
    let u = haar_random_unitary(9, &mut rng);
    let v = haar_random_unitary(9, &mut rng);
    c.bench_function("kron 9x9 * 9x9", |b| {
        b.iter(|| black_box(&u).kron(black_box(&v)))
    });
}

fn bench_seesaw_restart(c: &mut Criterion) {
    let mut rng = rng_from(12);
    let psi = StateVector::from_unnormalized(3, 3, random_state_amplitudes(27, &mut rng)).unwrap();
    let mut cfg = SeesawConfig::with_seed(12);
    cfg.restarts = 1;
    c.bench_function("see-saw single restart (3 qutrits)", |b| {
        b.iter(|| max_product_overlap(black_box(&psi), &cfg).unwrap())
    });
}

fn bench_boundary_solve(c: &mut Criterion) {
    c.bench_function("invariant boundary solve d=3", |b| {
        b.iter(|| invariant_boundary_point(3, black_box(0.7), PptFamily::PptAll).unwrap())
    });
}

fn bench_permutation_test(c: &mut Criterion) {
    let mut rng = rng_from(13);
    let psi = StateVector::from_unnormalized(3, 3, random_state_amplitudes(27, &mut rng)).unwrap();
    c.bench_function("permutation test exact (3 qutrits)", |b| {
        b.iter(|| permutation_test(black_box(&psi), TestMode::Exact).unwrap())
    });
}

fn bench_reduced_density(c: &mut Criterion) {
    let mut rng = rng_from(14);
    let psi = StateVector::from_unnormalized(3, 4, random_state_amplitudes(64, &mut rng)).unwrap();
    c.bench_function("reduced density 3 ququarts -> pair", |b| {
        b.iter(|| -> Operator { black_box(&psi).reduced_density(&[0, 1]).unwrap() })
    });
}

criterion_group!(
    kernels,
    bench_eig,
    bench_kron,
    bench_seesaw_restart,
    bench_boundary_solve,
    bench_permutation_test,
    bench_reduced_density
);
criterion_main!(kernels);
