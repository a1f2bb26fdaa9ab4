use super::{cell_energy, JointCdf};
use crate::error::{Error, Result};
use crate::special::KahanSum;

/// A probability measure on `[0,1]^2` with uniform density on each cell of a
/// tensor grid of (possibly unequal, possibly zero-width) bands. Zero-width
/// bands must carry zero mass.
#[derive(Debug, Clone, PartialEq)]
pub struct RectilinearMeasure {
    x_breaks: Vec<f64>,
    y_breaks: Vec<f64>,
    mass: Vec<f64>,
    prefix: Vec<f64>,
}

fn check_breaks(b: &[f64]) -> Result<()> {
    if b.len() < 2 || b[0] != 0.0 || b[b.len() - 1] != 1.0 || !b.windows(2).all(|w| w[1] >= w[0]) {
        return Err(Error::InvalidMeasure("breakpoints must rise from 0 to 1".into()));
    }
    Ok(())
}

impl RectilinearMeasure {
    /// `mass` is row-major with one row per x-band.
    pub fn new(x_breaks: Vec<f64>, y_breaks: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        check_breaks(&x_breaks)?;
        check_breaks(&y_breaks)?;
        let (r, c) = (x_breaks.len() - 1, y_breaks.len() - 1);
        if mass.len() != r * c {
            return Err(Error::InvalidMeasure(format!(
                "expected {} masses, got {}",
                r * c,
                mass.len()
            )));
        }
        if mass.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidMeasure("negative or non-finite mass".into()));
        }
        let total = mass.iter().copied().collect::<KahanSum>().value();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
        }
        for i in 0..r {
            for j in 0..c {
                let flat = x_breaks[i + 1] == x_breaks[i] || y_breaks[j + 1] == y_breaks[j];
                if flat && mass[i * c + j] > 0.0 {
                    return Err(Error::InvalidMeasure("zero-area cell carries mass".into()));
                }
            }
        }
        let mut prefix = vec![0.0; (r + 1) * (c + 1)];
        for i in 0..r {
            let mut row = 0.0;
            for j in 0..c {
                row += mass[i * c + j];
                prefix[(i + 1) * (c + 1) + j + 1] = prefix[i * (c + 1) + j + 1] + row;
            }
        }
        Ok(Self {
            x_breaks,
            y_breaks,
            mass,
            prefix,
        })
    }

    pub fn x_breaks(&self) -> &[f64] {
        &self.x_breaks
    }

    pub fn y_breaks(&self) -> &[f64] {
        &self.y_breaks
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x_breaks.len() - 1, self.y_breaks.len() - 1)
    }

    /// Mass of the rectangle `[0, breaks_x[i]] × [0, breaks_y[j]]`.
    pub fn corner(&self, i: usize, j: usize) -> f64 {
        self.prefix[i * (self.y_breaks.len()) + j]
    }

    pub fn relative_entropy(&self) -> f64 {
        let (r, c) = self.shape();
        let mut acc = KahanSum::new();
        for i in 0..r {
            let dx = self.x_breaks[i + 1] - self.x_breaks[i];
            for j in 0..c {
                let p = self.mass[i * c + j];
                if p > 0.0 {
                    let area = dx * (self.y_breaks[j + 1] - self.y_breaks[j]);
                    acc.add(-p * (p / area).ln());
                }
            }
        }
        acc.value()
    }

    pub fn energy(&self) -> f64 {
        let (r, c) = self.shape();
        cell_energy(&self.mass, r, c)
    }
}

/// Band index and fraction of the way through it; the last band is closed.
fn locate(breaks: &[f64], x: f64) -> (usize, f64) {
    let n = breaks.len() - 1;
    let x = x.clamp(0.0, 1.0);
    // first band whose right end reaches x
    let k = breaks[1..].partition_point(|&b| b < x).min(n - 1);
    let (lo, hi) = (breaks[k], breaks[k + 1]);
    let f = if hi > lo {
        ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    (k, f)
}

impl JointCdf for RectilinearMeasure {
    fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        let (i, fx) = locate(&self.x_breaks, x);
        let (j, fy) = locate(&self.y_breaks, y);
        let p = |a: usize, b: usize| self.corner(a, b);
        (1.0 - fx) * (1.0 - fy) * p(i, j)
            + fx * (1.0 - fy) * p(i + 1, j)
            + (1.0 - fx) * fy * p(i, j + 1)
            + fx * fy * p(i + 1, j + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_area_mass_rejected() {
        let b = vec![0.0, 0.5, 0.5, 1.0];
        let mut mass = vec![1.0 / 4.0, 0.0, 1.0 / 4.0, 0.0, 0.0, 0.0, 1.0 / 4.0, 0.0, 1.0 / 4.0];
        assert!(RectilinearMeasure::new(b.clone(), b.clone(), mass.clone()).is_ok());
        mass[4] = 0.1;
        mass[0] -= 0.1;
        assert!(RectilinearMeasure::new(b.clone(), b, mass).is_err());
    }

    #[test]
    fn cdf_at_breakpoints_is_exact() {
        let xb = vec![0.0, 0.2, 0.7, 1.0];
        let yb = vec![0.0, 0.6, 1.0];
        let m = vec![0.1, 0.2, 0.3, 0.15, 0.05, 0.2];
        let r = RectilinearMeasure::new(xb, yb, m).unwrap();
        assert_eq!(r.joint_cdf(0.2, 0.6), 0.1);
        assert!((r.joint_cdf(0.7, 1.0) - 0.75).abs() < 1e-15);
        assert!((r.joint_cdf(0.45, 0.3) - (0.05 + 0.5 * 0.5 * 0.3)).abs() < 1e-15);
        assert!((r.joint_cdf(1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_with_unequal_bands() {
        // uniform density on [0,1]^2 cut unevenly
        let xb = vec![0.0, 0.25, 1.0];
        let yb = vec![0.0, 0.5, 1.0];
        let m = vec![0.125, 0.125, 0.375, 0.375];
        let r = RectilinearMeasure::new(xb, yb, m).unwrap();
        assert!(r.relative_entropy().abs() < 1e-15);
        assert!((r.energy() - 0.25).abs() < 1e-15);
    }
}
