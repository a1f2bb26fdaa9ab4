//! Exact sampling of Mallows permutations and of `μ_{n,β}` point
//! configurations, plus the four-square counting statistics.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::qcomb::{inversions_of, ln_reduced_q_factorial_at, Permutation};
use crate::rng::RandomStream;

/// `n` points of the unit square with pairwise distinct abscissae and
/// pairwise distinct ordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<(f64, f64)>,
}

impl PointConfiguration {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for &(x, y) in &points {
            if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
                return Err(Error::InvalidMeasure(format!(
                    "point ({x}, {y}) outside the unit square"
                )));
            }
        }
        let distinct = |mut v: Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v.windows(2).all(|w| w[0] != w[1])
        };
        if !distinct(points.iter().map(|p| p.0).collect()) || !distinct(points.iter().map(|p| p.1).collect()) {
            return Err(Error::InvalidMeasure("coordinate tie".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The configuration with its pairs reordered: point `k` of the result is
    /// point `order[k]` of `self`.
    pub fn reordered(&self, order: &Permutation) -> Self {
        Self {
            points: order.as_slice().iter().map(|&i| self.points[i]).collect(),
        }
    }
}

/// Occupation numbers of the four quadrants `Λ_ij = L_i(θ₁) × L_j(θ₂)`,
/// with `L_1(θ) = [0, θ]` and `L_2(θ) = (θ, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SplitCounts {
    pub n11: usize,
    pub n12: usize,
    pub n21: usize,
    pub n22: usize,
}

impl SplitCounts {
    pub fn new(n11: usize, n12: usize, n21: usize, n22: usize) -> Self {
        Self { n11, n12, n21, n22 }
    }

    pub fn total(&self) -> usize {
        self.n11 + self.n12 + self.n21 + self.n22
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.n11, self.n12, self.n21, self.n22]
    }

    /// Every element of `Σ₄(n)` in lexicographic order.
    pub fn all(n: usize) -> Vec<SplitCounts> {
        let mut out = Vec::new();
        for n11 in 0..=n {
            for n12 in 0..=n - n11 {
                for n21 in 0..=n - n11 - n12 {
                    out.push(SplitCounts::new(n11, n12, n21, n - n11 - n12 - n21));
                }
            }
        }
        out
    }
}

/// Draws `J ∈ {0, .., k-1}` with `P(J = j) ∝ e^{j ln_q}`.
fn truncated_geometric(k: usize, ln_q: f64, rng: &mut RandomStream) -> usize {
    let u = rng.uniform();
    if ln_q == 0.0 {
        return ((u * k as f64) as usize).min(k - 1);
    }
    if ln_q > 0.0 {
        // mirror so the exponent is negative and nothing overflows
        return k - 1 - truncated_geometric_neg(k, -ln_q, u);
    }
    truncated_geometric_neg(k, ln_q, u)
}

fn truncated_geometric_neg(k: usize, a: f64, u: f64) -> usize {
    let l = (u * (k as f64 * a).exp_m1()).ln_1p();
    let j = (l / a).floor();
    if j.is_finite() && j >= 0.0 {
        (j as usize).min(k - 1)
    } else {
        0
    }
}

/// Exact sample from `P_{n,q}` by sequential insertion.
///
/// Item `k` is inserted at displacement `j` from the right end of the current
/// list (creating exactly `j` inversions) with probability proportional to
/// `q^j`. Final positions are resolved in reverse with a rank-indexed tree.
pub fn sample_mallows(n: usize, q: f64, rng: &mut RandomStream) -> Result<Permutation> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidQ(q));
    }
    Ok(sample_mallows_ln_q(n, q.ln(), rng))
}

pub(crate) fn sample_mallows_ln_q(n: usize, ln_q: f64, rng: &mut RandomStream) -> Permutation {
    let insert_at: Vec<usize> = (1..=n).map(|k| (k - 1) - truncated_geometric(k, ln_q, rng)).collect();
    let mut free = Fenwick::filled(n);
    let mut image = vec![0usize; n];
    for k in (0..n).rev() {
        let pos = free.find_kth(insert_at[k] as u64);
        image[pos] = k;
        free.add(pos, -1);
    }
    Permutation::from_vec_unchecked(image)
}

fn distinct_uniforms(n: usize, rng: &mut RandomStream) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    loop {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut clean = true;
        for w in idx.windows(2) {
            if v[w[0]] == v[w[1]] {
                v[w[1]] = rng.uniform();
                clean = false;
            }
        }
        if clean {
            return v;
        }
    }
}

/// Exact sample from `μ_{n,β}` through the permutation representation.
///
/// Abscissae are iid uniform (kept in draw order), ordinate values are sorted
/// iid uniforms, and the point with the `r`-th smallest abscissa receives the
/// `π_r`-th smallest ordinate for `π ~ P_{n,q}`, `q = exp(-β/(n-1))`. The
/// number of discordant pairs then equals `inv(π)`.
pub fn sample_configuration(n: usize, beta: f64, rng: &mut RandomStream) -> Result<PointConfiguration> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let xs = distinct_uniforms(n, rng);
    let mut us = distinct_uniforms(n, rng);
    us.sort_by(f64::total_cmp);
    let pi = sample_mallows_ln_q(n, -beta / (n - 1) as f64, rng);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut points = vec![(0.0, 0.0); n];
    for (rank, &i) in order.iter().enumerate() {
        points[i] = (xs[i], us[pi.as_slice()[rank]]);
    }
    Ok(PointConfiguration { points })
}

/// Quadrant occupation numbers at `(θ₁, θ₂)`.
pub fn four_square_counts(cfg: &PointConfiguration, theta1: f64, theta2: f64) -> SplitCounts {
    let mut c = SplitCounts::default();
    for &(x, y) in cfg.points() {
        match (x <= theta1, y <= theta2) {
            (true, true) => c.n11 += 1,
            (true, false) => c.n12 += 1,
            (false, true) => c.n21 += 1,
            (false, false) => c.n22 += 1,
        }
    }
    c
}

/// Empirical distribution function `n11 / n` at `(θ₁, θ₂)`.
pub fn empirical_cdf_at(cfg: &PointConfiguration, theta1: f64, theta2: f64) -> f64 {
    if cfg.is_empty() {
        return 0.0;
    }
    four_square_counts(cfg, theta1, theta2).n11 as f64 / cfg.len() as f64
}

/// The permutation read off a configuration: the point with the `r`-th
/// smallest abscissa has the `π_r`-th smallest ordinate.
pub fn configuration_permutation(cfg: &PointConfiguration) -> Permutation {
    let n = cfg.len();
    let pts = cfg.points();
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0));
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by(|&a, &b| pts[a].1.total_cmp(&pts[b].1));
    let mut y_rank = vec![0; n];
    for (r, &i) in by_y.iter().enumerate() {
        y_rank[i] = r;
    }
    Permutation::new(by_x.iter().map(|&i| y_rank[i]).collect()).expect("ranks form a permutation")
}

/// `ln(dμ_{n,β}/dλ^{⊗2n})` at a configuration, that is
/// `ln(n! P_{n,q}(π)) = inv(π) ln q - ln {n}!` with `q = exp(-β/(n-1))`.
pub fn configuration_log_density(cfg: &PointConfiguration, beta: f64) -> Result<f64> {
    let n = cfg.len();
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let ln_q = -beta / (n - 1) as f64;
    let pi = configuration_permutation(cfg);
    Ok(inversions_of(pi.as_slice()) as f64 * ln_q - ln_reduced_q_factorial_at(n, ln_q))
}

/// `empirical_cdf_at` over `replicas` independent configurations, replica `r`
/// using `RandomStream::replica(seed, r)`. Output order is replica order, so
/// the result does not depend on the thread count.
pub fn replicate_empirical_cdf(n: usize, beta: f64, theta: (f64, f64), replicas: usize, seed: u64) -> Result<Vec<f64>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = RandomStream::replica(seed, r);
            let cfg = sample_configuration(n, beta, &mut rng)?;
            Ok(empirical_cdf_at(&cfg, theta.0, theta.1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::{inv, mallows_pmf};

    #[test]
    fn density_is_flat_at_zero_beta_and_averages_to_one() {
        let mut rng = RandomStream::new(31);
        let cfg = sample_configuration(6, 0.0, &mut rng).unwrap();
        assert!(configuration_log_density(&cfg, 0.0).unwrap().abs() < 1e-14);
        // under iid uniform points every permutation has probability 1/n!
        let (n, beta, draws) = (4, 3.0, 200_000);
        let vals: Vec<f64> = (0..draws)
            .map(|_| {
                let pts = (0..n).map(|_| (rng.uniform(), rng.uniform())).collect();
                configuration_log_density(&PointConfiguration::new(pts).unwrap(), beta)
                    .unwrap()
                    .exp()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / draws as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / draws as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * sd / (draws as f64).sqrt(), "{mean}");
    }

    #[test]
    fn configuration_permutation_matches_the_sampler() {
        let mut rng = RandomStream::new(32);
        let cfg = sample_configuration(50, 5.0, &mut rng).unwrap();
        let pi = configuration_permutation(&cfg);
        let pts = cfg.points();
        let mut order: Vec<usize> = (0..50).collect();
        order.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0));
        for w in 0..49 {
            let (i, j) = (order[w], order[w + 1]);
            assert_eq!(pi.as_slice()[w] < pi.as_slice()[w + 1], pts[i].1 < pts[j].1);
        }
    }

    #[test]
    fn near_zero_q_gives_identity() {
        let mut rng = RandomStream::new(11);
        for n in [1, 5, 40, 200] {
            for _ in 0..50 {
                let p = sample_mallows(n, 1e-12, &mut rng).unwrap();
                assert_eq!(p, Permutation::identity(n));
            }
        }
    }

    #[test]
    fn huge_q_gives_reversal() {
        let mut rng = RandomStream::new(12);
        let p = sample_mallows(30, 1e12, &mut rng).unwrap();
        assert_eq!(inv(&p), 30 * 29 / 2);
    }

    #[test]
    fn rejects_bad_q() {
        let mut rng = RandomStream::new(1);
        assert!(sample_mallows(3, 0.0, &mut rng).is_err());
        assert!(sample_mallows(3, f64::NAN, &mut rng).is_err());
        assert!(sample_configuration(1, 0.0, &mut rng).is_err());
    }

    #[test]
    fn small_pmf_total_variation() {
        let n = 4;
        let q = 0.5;
        let draws = 1_000_000;
        let mut rng = RandomStream::new(2024);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            *counts.entry(sample_mallows(n, q, &mut rng).unwrap()).or_insert(0usize) += 1;
        }
        let mut tv = 0.0;
        crate::qcomb::for_each_permutation(n, |p| {
            let pi = Permutation::new(p.to_vec()).unwrap();
            let emp = *counts.get(&pi).unwrap_or(&0) as f64 / draws as f64;
            tv += (emp - mallows_pmf(&pi, q).unwrap()).abs();
        });
        assert!(0.5 * tv < 0.005, "tv = {}", 0.5 * tv);
    }

    #[test]
    fn pairs_are_both_coordinates_distinct() {
        let mut rng = RandomStream::new(3);
        let cfg = sample_configuration(500, 3.0, &mut rng).unwrap();
        assert!(PointConfiguration::new(cfg.points().to_vec()).is_ok());
    }

    #[test]
    fn quadrant_boundaries() {
        let cfg = PointConfiguration::new(vec![(0.5, 0.25)]).unwrap();
        assert_eq!(four_square_counts(&cfg, 0.5, 0.25), SplitCounts::new(1, 0, 0, 0));
        let cfg = PointConfiguration::new(vec![(0.1, 0.1), (0.2, 0.3), (0.3, 0.2)]).unwrap();
        assert_eq!(four_square_counts(&cfg, 0.4, 0.4), SplitCounts::new(3, 0, 0, 0));
        assert_eq!(empirical_cdf_at(&cfg, 1.0, 1.0), 1.0);
        assert_eq!(empirical_cdf_at(&cfg, 0.05, 0.9), 0.0);
        let mut rng = RandomStream::new(4);
        let cfg = sample_configuration(97, -1.0, &mut rng).unwrap();
        for &(a, b) in &[(0.1, 0.9), (0.5, 0.5), (0.77, 0.2)] {
            assert_eq!(four_square_counts(&cfg, a, b).total(), 97);
        }
    }

    #[test]
    fn sigma4_enumeration() {
        // C(n+3, 3) elements
        assert_eq!(SplitCounts::all(5).len(), 56);
        assert!(SplitCounts::all(7).iter().all(|c| c.total() == 7));
    }

    #[test]
    fn replicas_are_deterministic() {
        let a = replicate_empirical_cdf(50, 1.0, (0.5, 0.5), 16, 99).unwrap();
        let b = replicate_empirical_cdf(50, 1.0, (0.5, 0.5), 16, 99).unwrap();
        assert_eq!(a, b);
    }
}
