use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mallows_bench::*;
use mallows_core::foursquare::FourSquareOracle;
use mallows_core::measures::standardize;
use mallows_core::qcomb::{inv_fenwick, ln_reduced_q_factorial_at};
use mallows_core::*;

fn inversions(c: &mut Criterion) {
    let mut g = c.benchmark_group("inversions");
    for n in [1_000, 100_000] {
        let p = mallows_permutation(n, 5.0);
        g.bench_with_input(BenchmarkId::new("merge", n), &p, |b, p| b.iter(|| inv(black_box(p))));
        g.bench_with_input(BenchmarkId::new("fenwick", n), &p, |b, p| {
            b.iter(|| inv_fenwick(black_box(p)))
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampling");
    for n in [1_000, 100_000] {
        let q = (-2.0 / (n - 1) as f64).exp();
        g.bench_function(BenchmarkId::new("permutation", n), |b| {
            let mut rng = RandomStream::new(SEED);
            b.iter(|| sample_mallows(n, q, &mut rng).unwrap())
        });
        g.bench_function(BenchmarkId::new("configuration", n), |b| {
            let mut rng = RandomStream::new(SEED);
            b.iter(|| sample_configuration(n, 2.0, &mut rng).unwrap())
        });
    }
    g.finish();
}

fn special_functions(c: &mut Criterion) {
    let betas: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.75).collect();
    c.bench_function("pressure/41 betas", |b| {
        b.iter(|| betas.iter().map(|&x| pressure(black_box(x))).sum::<f64>())
    });
    c.bench_function("reduced_q_factorial/n=1e6", |b| {
        b.iter(|| ln_reduced_q_factorial_at(black_box(1_000_000), -2e-6))
    });
}

fn four_square(c: &mut Criterion) {
    let lattice = theta_lattice(9);
    c.bench_function("closed_form_R/81 points", |b| {
        b.iter(|| {
            lattice
                .iter()
                .map(|&(x, y)| closed_form_R(x, y, black_box(3.0)))
                .sum::<f64>()
        })
    });
    c.bench_function("solve_critical_t/81 points", |b| {
        b.iter(|| {
            lattice
                .iter()
                .map(|&(x, y)| solve_critical_t(x, y, black_box(3.0)).unwrap())
                .sum::<f64>()
        })
    });
    let counts = SplitCounts::new(2, 1, 1, 3);
    c.bench_function("discrete_formula/n=7", |b| {
        b.iter(|| discrete_four_square_prob(black_box(&counts), 0.4, 0.6, 7, 1.0).unwrap())
    });
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("table/n=8", |b| {
        b.iter(|| FourSquareOracle::new(black_box(8), 1.0).unwrap())
    });
    g.finish();
}

fn measures(c: &mut Criterion) {
    let mut g = c.benchmark_group("measures");
    for m in [64, 256] {
        let eq = equilibrium_grid(m, 2.0);
        let sk = skewed_grid(m);
        g.bench_with_input(BenchmarkId::new("rate_function", m), &eq, |b, mu| {
            b.iter(|| mu.rate_function(2.0))
        });
        g.bench_with_input(BenchmarkId::new("standardize", m), &sk, |b, mu| {
            b.iter(|| standardize(mu).unwrap())
        });
        g.bench_function(BenchmarkId::new("discretize_limit", m), |b| {
            b.iter(|| equilibrium_grid(black_box(m), 2.0))
        });
    }
    g.finish();
}

criterion_group!(benches, inversions, sampling, special_functions, four_square, measures);
criterion_main!(benches);
