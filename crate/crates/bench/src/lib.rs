//! Deterministic inputs shared by the kernel benchmarks.

use mallows_core::{sample_mallows, GridMeasure, LimitMeasure, Permutation, RandomStream};

pub const SEED: u64 = 0x5eed;

/// A Mallows permutation at `q = exp(-β/(n-1))`.
pub fn mallows_permutation(n: usize, beta: f64) -> Permutation {
    let q = (-beta / (n - 1) as f64).exp();
    sample_mallows(n, q, &mut RandomStream::new(SEED)).expect("valid q")
}

/// The `m × m` discretization of the limiting measure.
pub fn equilibrium_grid(m: usize, beta: f64) -> GridMeasure {
    GridMeasure::from_cdf(m, &LimitMeasure::new(beta)).expect("valid measure")
}

/// A grid measure with skewed, uneven marginals.
pub fn skewed_grid(m: usize) -> GridMeasure {
    let mut rng = RandomStream::new(SEED);
    let w = (0..m * m)
        .map(|k| {
            let (i, j) = ((k / m) as f64 / m as f64, (k % m) as f64 / m as f64);
            (1.0 + 3.0 * i * j) * (0.5 + rng.uniform())
        })
        .collect();
    GridMeasure::from_weights(m, w).expect("positive weights")
}

/// Interior `(θ₁, θ₂)` pairs on a `k × k` lattice.
pub fn theta_lattice(k: usize) -> Vec<(f64, f64)> {
    let t = |i: usize| (i + 1) as f64 / (k + 1) as f64;
    (0..k).flat_map(|i| (0..k).map(move |j| (t(i), t(j)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(mallows_permutation(100, 3.0), mallows_permutation(100, 3.0));
        assert_eq!(skewed_grid(8), skewed_grid(8));
        assert_eq!(theta_lattice(3).len(), 9);
        assert_eq!(equilibrium_grid(16, 2.0).m(), 16);
    }
}
