//! Independent reference implementations used only by the integration tests.
#![allow(dead_code)]

use mallows_core::{GridMeasure, LineMeasure, RandomStream};

/// Inversions by checking every pair.
pub fn inv_pairs(xs: &[usize]) -> u64 {
    let mut c = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                c += 1;
            }
        }
    }
    c
}

/// Heap's algorithm, independent of the library's lexicographic iterator.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, xs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(xs.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, xs, out);
            if k.is_multiple_of(2) {
                xs.swap(i, k - 1);
            } else {
                xs.swap(0, k - 1);
            }
        }
        heap(k - 1, xs, out);
    }
    let mut xs: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut xs, &mut out);
    out
}

/// `Σ_{π ∈ S_n} q^{inv(π)}` by enumeration.
pub fn q_factorial_by_enumeration(n: usize, q: f64) -> f64 {
    all_permutations(n).iter().map(|p| q.powi(inv_pairs(p) as i32)).sum()
}

/// `Σ_{σ ∈ Sh_{n,k}} q^{inv(σ)}`: shuffles increasing on the first `k` and
/// the last `n-k` positions, one for each `k`-subset.
pub fn gaussian_binomial_by_shuffles(n: usize, k: usize, q: f64) -> f64 {
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let first: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 0).collect();
        let sigma: Vec<usize> = first.into_iter().chain(rest).collect();
        total += q.powi(inv_pairs(&sigma) as i32);
    }
    total
}

/// `ln((1 - e^{-u})/u)` evaluated naively away from zero.
fn integrand_naive(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        -u / 2.0 + u * u / 24.0
    } else {
        ((1.0 - (-u).exp()) / u).ln()
    }
}

/// Pressure by composite Simpson with a fine uniform mesh.
pub fn pressure_simpson(beta: f64) -> f64 {
    let n = 20_000;
    let h = 1.0 / n as f64;
    let mut s = integrand_naive(0.0) + integrand_naive(beta);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * integrand_naive(beta * k as f64 * h);
    }
    s * h / 3.0
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

pub fn random_grid(m: usize, rng: &mut RandomStream) -> GridMeasure {
    // heavy-tailed weights so that some cells are nearly empty
    let w = (0..m * m).map(|_| rng.uniform().powi(3)).collect();
    GridMeasure::from_weights(m, w).unwrap()
}

/// A smooth positive density: a floor plus three Gaussian bumps with
/// random centres, scales and correlations.
pub fn random_smooth_density(rng: &mut RandomStream) -> impl Fn(f64, f64) -> f64 {
    let bumps: Vec<[f64; 6]> = (0..3)
        .map(|_| {
            [
                rng.uniform(),
                rng.uniform(),
                0.08 + 0.25 * rng.uniform(),
                0.08 + 0.25 * rng.uniform(),
                1.6 * rng.uniform() - 0.8,
                0.2 + rng.uniform(),
            ]
        })
        .collect();
    let floor = 0.05 + 0.3 * rng.uniform();
    move |x, y| {
        floor
            + bumps
                .iter()
                .map(|&[cx, cy, sx, sy, r, w]| {
                    let (u, v) = ((x - cx) / sx, (y - cy) / sy);
                    w * (-(u * u - 2.0 * r * u * v + v * v) / (2.0 * (1.0 - r * r))).exp()
                })
                .sum::<f64>()
    }
}

/// Random band masses on `m` bands, supported on bands `lo..hi`.
pub fn random_line_measure(m: usize, lo: usize, hi: usize, rng: &mut RandomStream) -> LineMeasure {
    let w = (0..m)
        .map(|k| {
            if (lo..hi).contains(&k) {
                rng.uniform().powi(2) + 1e-3
            } else {
                0.0
            }
        })
        .collect();
    LineMeasure::from_weights(w).unwrap()
}

/// Midpoint rule on an `n × n` grid of the rectangle.
pub fn midpoint_2d<F: Fn(f64, f64) -> f64>(x: (f64, f64), y: (f64, f64), n: usize, f: F) -> f64 {
    let (hx, hy) = ((x.1 - x.0) / n as f64, (y.1 - y.0) / n as f64);
    let mut s = 0.0;
    for i in 0..n {
        let xi = x.0 + (i as f64 + 0.5) * hx;
        for j in 0..n {
            s += f(xi, y.0 + (j as f64 + 0.5) * hy);
        }
    }
    s * hx * hy
}
