use crate::error::{Error, Result};
use crate::special::KahanSum;

/// Distribution function of a probability measure on `[0,1]` that is uniform
/// on each band `((k-1)/m, k/m]`, stored by its values at `k/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalCDF {
    values: Vec<f64>,
}

impl MarginalCDF {
    /// `values[k] = F(k/m)` for `k = 0..=m`; must be nondecreasing from 0 to 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidCdf("need at least two values".into()));
        }
        if values[0].abs() > 1e-12 || (values[values.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCdf("endpoints must be 0 and 1".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidCdf("values must be finite and nondecreasing".into()));
        }
        let mut values = values;
        let last = values.len() - 1;
        values[0] = 0.0;
        values[last] = 1.0;
        Ok(Self { values })
    }

    pub fn uniform(m: usize) -> Self {
        Self {
            values: (0..=m).map(|k| k as f64 / m as f64).collect(),
        }
    }

    /// From band masses summing to one.
    pub(crate) fn from_band_masses(masses: Vec<f64>) -> Self {
        let mut values = Vec::with_capacity(masses.len() + 1);
        let mut acc = KahanSum::new();
        values.push(0.0);
        for p in &masses {
            acc.add(*p);
            values.push(acc.value().clamp(0.0, 1.0));
        }
        let last = values.len() - 1;
        values[last] = 1.0;
        for k in 1..values.len() {
            if values[k] < values[k - 1] {
                values[k] = values[k - 1];
            }
        }
        Self { values }
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn band_masses(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Piecewise-linear interpolation of the stored values.
    pub fn eval(&self, a: f64) -> f64 {
        let m = self.m();
        let s = a.clamp(0.0, 1.0) * m as f64;
        let k = (s.floor() as usize).min(m - 1);
        let r = s - k as f64;
        self.values[k] + r * (self.values[k + 1] - self.values[k])
    }

    /// Bands carrying no mass.
    pub fn degenerate_bands(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&k| self.values[k + 1] <= self.values[k])
            .collect()
    }

    /// `S(μ|λ) = -Σ p ln(p m)`.
    pub fn relative_entropy(&self) -> f64 {
        let m = self.m() as f64;
        -self
            .band_masses()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * (p * m).ln())
            .collect::<KahanSum>()
            .value()
    }
}

/// `F^I(x) = inf{a ∈ [0,1] : F(a) ≥ x}`.
pub fn generalized_inverse(f: &MarginalCDF, x: f64) -> f64 {
    let v = f.values();
    let m = f.m();
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        // first a with F(a) = 1
        let k = v.partition_point(|&y| y < 1.0);
        return k as f64 / m as f64;
    }
    let k = v.partition_point(|&y| y < x); // v[k-1] < x <= v[k], k >= 1
    let (lo, hi) = (v[k - 1], v[k]);
    ((k - 1) as f64 + (x - lo) / (hi - lo)) / m as f64
}

/// A probability measure on `[0,1]` uniform on each of `m` equal bands.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMeasure {
    mass: Vec<f64>,
}

impl LineMeasure {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() || mass.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidMeasure("band masses must be nonnegative".into()));
        }
        let total = mass.iter().copied().collect::<KahanSum>().value();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
        }
        Ok(Self { mass })
    }

    pub fn from_weights(mut w: Vec<f64>) -> Result<Self> {
        let total: f64 = w.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        w.iter_mut().for_each(|x| *x /= total);
        Self::new(w)
    }

    pub fn uniform(m: usize) -> Self {
        Self {
            mass: vec![1.0 / m as f64; m],
        }
    }

    pub fn m(&self) -> usize {
        self.mass.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn cdf(&self) -> MarginalCDF {
        MarginalCDF::from_band_masses(self.mass.clone())
    }

    pub fn relative_entropy(&self) -> f64 {
        let m = self.m() as f64;
        -self
            .mass
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * (p * m).ln())
            .collect::<KahanSum>()
            .value()
    }

    /// `∫∫ 1{x₂ < x₁} dμ(x₁) dν(x₂)` for independent draws from the two
    /// measures; ties inside a shared band count ½.
    pub fn discordance(&self, other: &LineMeasure) -> f64 {
        assert_eq!(self.m(), other.m(), "measures on different grids");
        let mut below = 0.0;
        let mut acc = KahanSum::new();
        for (a, b) in self.mass.iter().zip(&other.mass) {
            acc.add(a * (below + 0.5 * b));
            below += b;
        }
        acc.value()
    }
}

/// `-θ S(μ) - (1-θ) S(μ̃) + β θ(1-θ) ∫∫ 1{x₂<x₁} dμ dμ̃`.
pub fn two_square_lhs(mu: &LineMeasure, mu_tilde: &LineMeasure, theta: f64, beta: f64) -> f64 {
    two_square_lhs_scaled(mu, mu_tilde, theta, 1.0 - theta, beta)
}

/// The same functional with independent weights `t1`, `t2` on the two pieces.
pub fn two_square_lhs_scaled(nu1: &LineMeasure, nu2: &LineMeasure, t1: f64, t2: f64, beta: f64) -> f64 {
    -t1 * nu1.relative_entropy() - t2 * nu2.relative_entropy() + beta * t1 * t2 * nu1.discordance(nu2)
}
