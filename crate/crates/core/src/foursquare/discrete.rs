use super::quadrant_areas;
use crate::error::{Error, Result};
use crate::qcomb::{inversions_of, ln_reduced_q_factorial_at, next_permutation};
use crate::sampler::SplitCounts;
use crate::special::{ln_binomial, ln_factorial, KahanSum};
use rayon::prelude::*;

/// Largest `n` the enumeration oracle accepts.
pub const ORACLE_MAX_N: usize = 9;

fn check_counts(counts: &SplitCounts, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if counts.total() != n {
        return Err(Error::InconsistentCounts { sum: counts.total(), n });
    }
    Ok(())
}

fn check_unit(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

/// `k ln x` with `0 · ln 0 = 0`.
fn k_ln(k: usize, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// `ln P(n₁₁, n₁₂, n₂₁, n₂₂)` for `n` points drawn from the Mallows point
/// process at `q = e^{-β/(n-1)}`: the multinomial term with cell areas,
/// corrected by `q^{n₁₂n₂₁}` and a ratio of reduced q-factorials
/// `{k}! = [k]_q!/k!` of the row, column and cell counts.
pub fn discrete_four_square_log_prob(
    counts: &SplitCounts,
    theta1: f64,
    theta2: f64,
    n: usize,
    beta: f64,
) -> Result<f64> {
    check_counts(counts, n)?;
    check_unit(theta1)?;
    check_unit(theta2)?;
    let ln_q = -beta / (n - 1) as f64;
    let [n11, n12, n21, n22] = counts.as_array();
    let areas = quadrant_areas(theta1, theta2);
    let l = |k: usize| ln_reduced_q_factorial_at(k, ln_q);
    let mut acc = KahanSum::new();
    acc.add(ln_factorial(n));
    for (k, a) in counts.as_array().into_iter().zip(areas) {
        acc.add(-ln_factorial(k));
        acc.add(k_ln(k, a));
    }
    acc.add((n12 * n21) as f64 * ln_q);
    for k in [n11 + n12, n11 + n21, n12 + n22, n21 + n22] {
        acc.add(l(k));
    }
    for k in [n11, n12, n21, n22, n] {
        acc.add(-l(k));
    }
    Ok(acc.value())
}

pub fn discrete_four_square_prob(counts: &SplitCounts, theta1: f64, theta2: f64, n: usize, beta: f64) -> Result<f64> {
    discrete_four_square_log_prob(counts, theta1, theta2, n, beta).map(f64::exp)
}

/// Law of the rank-overlap statistic under `P_{n,q}`: entry `[a][b][c]` is the
/// probability that exactly `c` of the first `a` values of `π` lie below `b`.
#[derive(Debug, Clone)]
pub struct FourSquareOracle {
    n: usize,
    beta: f64,
    table: Vec<f64>,
}

impl FourSquareOracle {
    /// Enumerates `S_n` once; `n ≤ 9`.
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n > ORACLE_MAX_N {
            return Err(Error::EnumerationBudget { n, max: ORACLE_MAX_N });
        }
        if n < 2 {
            return Err(Error::SizeTooSmall { n, min: 2 });
        }
        let ln_q = -beta / (n - 1) as f64;
        let ln_z = ln_factorial(n) + ln_reduced_q_factorial_at(n, ln_q);
        let size = (n + 1) * (n + 1) * (n + 1);
        // one chunk per leading value, reduced in lexicographic order
        let chunks: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut table = vec![0.0; size];
                let mut perm: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&v| v != first)).collect();
                let mut below = vec![0usize; n + 1];
                loop {
                    let w = (inversions_of(&perm) as f64 * ln_q - ln_z).exp();
                    below.iter_mut().for_each(|c| *c = 0);
                    for a in 0..=n {
                        if a > 0 {
                            for c in below.iter_mut().skip(perm[a - 1] + 1) {
                                *c += 1;
                            }
                        }
                        let row = (a * (n + 1)) * (n + 1);
                        for (b, &c) in below.iter().enumerate() {
                            table[row + b * (n + 1) + c] += w;
                        }
                    }
                    if !next_permutation(&mut perm[1..]) {
                        break;
                    }
                }
                table
            })
            .collect();
        let mut table = vec![0.0; size];
        for chunk in &chunks {
            for (t, c) in table.iter_mut().zip(chunk) {
                *t += c;
            }
        }
        Ok(Self { n, beta, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `P(#{k < a : π_k < b} = c)`.
    pub fn overlap_prob(&self, a: usize, b: usize, c: usize) -> f64 {
        let m = self.n + 1;
        self.table[(a * m + b) * m + c]
    }

    /// The four-square probability: row count `a = n₁₁+n₁₂` and column
    /// count `b = n₁₁+n₂₁` are independent binomials, and the permutation
    /// links them through the overlap `n₁₁`.
    pub fn prob(&self, counts: &SplitCounts, theta1: f64, theta2: f64) -> Result<f64> {
        check_counts(counts, self.n)?;
        check_unit(theta1)?;
        check_unit(theta2)?;
        let n = self.n;
        let a = counts.n11 + counts.n12;
        let b = counts.n11 + counts.n21;
        let binom = |k: usize, th: f64| (ln_binomial(n, k) + k_ln(k, th) + k_ln(n - k, 1.0 - th)).exp();
        Ok(binom(a, theta1) * binom(b, theta2) * self.overlap_prob(a, b, counts.n11))
    }
}

/// Exact four-square probability by enumeration of `S_n`, `n ≤ 9`.
pub fn discrete_four_square_oracle(counts: &SplitCounts, theta1: f64, theta2: f64, n: usize, beta: f64) -> Result<f64> {
    FourSquareOracle::new(n, beta)?.prob(counts, theta1, theta2)
}

/// Nearest-integer counts `≈ n t_ij` summing to `n`: floors plus the
/// leftover units given to the largest fractional parts, ties going to the
/// earlier cell in the order `11, 12, 21, 22`.
pub fn round_counts(t: [f64; 4], n: usize) -> SplitCounts {
    let scaled = t.map(|x| x.max(0.0) * n as f64);
    let mut c = scaled.map(|x| x.floor() as usize);
    let assigned: usize = c.iter().sum();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        (scaled[j] - scaled[j].floor())
            .total_cmp(&(scaled[i] - scaled[i].floor()))
            .then(i.cmp(&j))
    });
    if assigned <= n {
        for &i in order.iter().cycle().take(n - assigned) {
            c[i] += 1;
        }
    } else {
        let mut excess = assigned - n;
        for &i in order.iter().rev().cycle() {
            if excess == 0 {
                break;
            }
            if c[i] > 0 {
                c[i] -= 1;
                excess -= 1;
            }
        }
    }
    SplitCounts::new(c[0], c[1], c[2], c[3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multinomial(counts: &SplitCounts, theta1: f64, theta2: f64) -> f64 {
        let n = counts.total();
        let areas = quadrant_areas(theta1, theta2);
        let mut ln = ln_factorial(n);
        for (k, a) in counts.as_array().into_iter().zip(areas) {
            ln += k_ln(k, a) - ln_factorial(k);
        }
        ln.exp()
    }

    #[test]
    fn rejects_bad_input() {
        let c = SplitCounts::new(1, 1, 1, 0);
        assert!(discrete_four_square_prob(&c, 0.5, 0.5, 4, 1.0).is_err());
        assert!(discrete_four_square_prob(&SplitCounts::new(1, 0, 0, 0), 0.5, 0.5, 1, 1.0).is_err());
        assert!(FourSquareOracle::new(10, 0.0).is_err());
    }

    #[test]
    fn zero_beta_is_multinomial() {
        for n in [2, 5] {
            let oracle = FourSquareOracle::new(n, 0.0).unwrap();
            for c in SplitCounts::all(n) {
                let m = multinomial(&c, 0.3, 0.8);
                assert!((discrete_four_square_prob(&c, 0.3, 0.8, n, 0.0).unwrap() - m).abs() < 1e-15);
                assert!((oracle.prob(&c, 0.3, 0.8).unwrap() - m).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_cell_collapses() {
        for n in [3, 7, 40] {
            let c = SplitCounts::new(n, 0, 0, 0);
            let p = discrete_four_square_prob(&c, 0.4, 0.6, n, 3.0).unwrap();
            assert!((p / multinomial(&c, 0.4, 0.6) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn formula_matches_oracle_small() {
        for n in [3, 4, 5] {
            for beta in [-(n as f64 - 1.0) * 4f64.ln(), 2.0] {
                let oracle = FourSquareOracle::new(n, beta).unwrap();
                let mut total = 0.0;
                for c in SplitCounts::all(n) {
                    let e = oracle.prob(&c, 0.4, 0.6).unwrap();
                    let f = discrete_four_square_prob(&c, 0.4, 0.6, n, beta).unwrap();
                    assert!((f / e - 1.0).abs() < 1e-12, "{c:?}: {f} vs {e}");
                    total += e;
                }
                assert!((total - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn oracle_is_thread_count_independent() {
        let a = FourSquareOracle::new(6, 1.3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| FourSquareOracle::new(6, 1.3).unwrap());
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_counts([0.25; 4], 10), SplitCounts::new(3, 3, 2, 2));
        assert_eq!(
            round_counts([0.31, 0.19, 0.19, 0.31], 100),
            SplitCounts::new(31, 19, 19, 31)
        );
        assert_eq!(round_counts([0.5, 0.5, 0.0, 0.0], 3), SplitCounts::new(2, 1, 0, 0));
        for n in [1, 7, 1000] {
            assert_eq!(round_counts([0.123, 0.456, 0.2, 0.221], n).total(), n);
        }
    }
}
