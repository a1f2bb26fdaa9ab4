use super::{cell_energy, JointCdf, MarginalCDF, RectilinearMeasure};
use crate::error::{Error, Result};
use crate::pressure::pressure;
use crate::special::KahanSum;

/// Tolerance on the total mass of a [`GridMeasure`].
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A probability measure on `[0,1]^2` with uniform density inside each cell
/// of the `m × m` grid. Cell `(i, j)` (zero-based) is the rectangle
/// `(i/m, (i+1)/m] × (j/m, (j+1)/m]`; `i` indexes the x-band.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    m: usize,
    mass: Vec<f64>,
}

impl GridMeasure {
    /// Validates nonnegativity and total mass 1 (within 1e-12).
    pub fn new(m: usize, mass: Vec<f64>) -> Result<Self> {
        if m == 0 || mass.len() != m * m {
            return Err(Error::InvalidMeasure(format!(
                "expected {}x{} masses, got {}",
                m,
                m,
                mass.len()
            )));
        }
        if let Some(bad) = mass.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("negative or non-finite mass {bad}")));
        }
        let total = mass.iter().copied().collect::<KahanSum>().value();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
        }
        Ok(Self { m, mass })
    }

    /// Normalizes nonnegative weights to a probability measure.
    pub fn from_weights(m: usize, mut weights: Vec<f64>) -> Result<Self> {
        let total = weights.iter().copied().collect::<KahanSum>().value();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(m, weights)
    }

    pub fn uniform(m: usize) -> Self {
        let p = 1.0 / (m * m) as f64;
        Self {
            m,
            mass: vec![p; m * m],
        }
    }

    /// Cell masses from a density sampled at the cell midpoints.
    pub fn from_density<F: Fn(f64, f64) -> f64>(m: usize, density: F) -> Result<Self> {
        let h = 1.0 / m as f64;
        let w = (0..m * m)
            .map(|c| density(((c / m) as f64 + 0.5) * h, ((c % m) as f64 + 0.5) * h).max(0.0))
            .collect();
        Self::from_weights(m, w)
    }

    /// Exact cell masses of a measure given by its distribution function.
    pub fn from_cdf<C: JointCdf + ?Sized>(m: usize, cdf: &C) -> Result<Self> {
        let h = 1.0 / m as f64;
        let edge = |k: usize| if k == m { 1.0 } else { k as f64 * h };
        let mut corner = vec![0.0; (m + 1) * (m + 1)];
        for i in 0..=m {
            for j in 0..=m {
                corner[i * (m + 1) + j] = cdf.joint_cdf(edge(i), edge(j));
            }
        }
        let c = |i: usize, j: usize| corner[i * (m + 1) + j];
        let mass = (0..m * m)
            .map(|k| {
                let (i, j) = (k / m, k % m);
                (c(i + 1, j + 1) - c(i, j + 1) - c(i + 1, j) + c(i, j)).max(0.0)
            })
            .collect();
        Self::from_weights(m, mass)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.m + j]
    }

    /// Row-major masses.
    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn marginal_x(&self) -> MarginalCDF {
        let m = self.m;
        MarginalCDF::from_band_masses((0..m).map(|i| self.mass[i * m..(i + 1) * m].iter().sum()).collect())
    }

    pub fn marginal_y(&self) -> MarginalCDF {
        let m = self.m;
        let mut cols = vec![0.0; m];
        for row in self.mass.chunks(m) {
            for (c, v) in cols.iter_mut().zip(row) {
                *c += v;
            }
        }
        MarginalCDF::from_band_masses(cols)
    }

    /// `S(μ | λ⊗²) = -Σ p ln(p m²)`.
    pub fn relative_entropy(&self) -> f64 {
        let m2 = (self.m * self.m) as f64;
        -self
            .mass
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * (p * m2).ln())
            .collect::<KahanSum>()
            .value()
    }

    pub fn energy(&self) -> f64 {
        cell_energy(&self.mass, self.m, self.m)
    }

    /// `I_β(μ) = -S(μ|λ⊗²) + β E(μ) + p(β)`.
    pub fn rate_function(&self, beta: f64) -> f64 {
        -self.relative_entropy() + beta * self.energy() + pressure(beta)
    }

    /// Total-variation distance `½ Σ |p - p'|`.
    pub fn total_variation(&self, other: &GridMeasure) -> f64 {
        assert_eq!(self.m, other.m, "grids differ in resolution");
        0.5 * self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn to_rectilinear(&self) -> RectilinearMeasure {
        let breaks: Vec<f64> = (0..=self.m).map(|k| k as f64 / self.m as f64).collect();
        RectilinearMeasure::new(breaks.clone(), breaks, self.mass.clone())
            .expect("uniform grid is a valid rectilinear measure")
    }
}

impl JointCdf for GridMeasure {
    fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        let m = self.m as f64;
        // bilinear in the fractional cell indices
        let (fx, fy) = ((x.clamp(0.0, 1.0) * m), (y.clamp(0.0, 1.0) * m));
        let (ix, iy) = (
            (fx.floor() as usize).min(self.m - 1),
            (fy.floor() as usize).min(self.m - 1),
        );
        let (rx, ry) = (fx - ix as f64, fy - iy as f64);
        let mut full = 0.0;
        let mut part_row = 0.0;
        let mut part_col = 0.0;
        for i in 0..ix {
            for j in 0..iy {
                full += self.mass(i, j);
            }
            part_col += self.mass(i, iy);
        }
        for j in 0..iy {
            part_row += self.mass(ix, j);
        }
        full + rx * part_row + ry * part_col + rx * ry * self.mass(ix, iy)
    }
}

pub fn relative_entropy(mu: &GridMeasure) -> f64 {
    mu.relative_entropy()
}

pub fn energy(mu: &GridMeasure) -> f64 {
    mu.energy()
}

pub fn rate_function(mu: &GridMeasure, beta: f64) -> f64 {
    mu.rate_function(beta)
}

pub fn marginal_x(mu: &GridMeasure) -> MarginalCDF {
    mu.marginal_x()
}

pub fn marginal_y(mu: &GridMeasure) -> MarginalCDF {
    mu.marginal_y()
}
