//! Piecewise-uniform probability measures on the unit square and interval:
//! entropy, energy, marginals, generalized inverses, standardization and the
//! rate function.

mod grid;
mod io;
mod line;
mod rectilinear;
mod standardize;

pub use grid::{energy, marginal_x, marginal_y, rate_function, relative_entropy, GridMeasure};
pub use line::{generalized_inverse, two_square_lhs, two_square_lhs_scaled, LineMeasure, MarginalCDF};
pub use rectilinear::RectilinearMeasure;
pub use standardize::{renormalize, standardize, Standardized};

/// A probability measure on `[0,1]^2` known through its distribution
/// function `(x, y) ↦ ν([0,x] × [0,y])`.
pub trait JointCdf {
    fn joint_cdf(&self, x: f64, y: f64) -> f64;
}

impl<T: JointCdf + ?Sized> JointCdf for &T {
    fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        (**self).joint_cdf(x, y)
    }
}

/// Energy of a piecewise-uniform measure given by its cell masses, row-major
/// with `rows` x-bands and `cols` y-bands.
///
/// Two cells strictly discordant (one strictly left of and strictly above
/// the other) contribute with probability 1, cells sharing a band contribute
/// with probability ½, concordant cells not at all. The value depends only on
/// the ordering of bands, not on their widths.
pub(crate) fn cell_energy(mass: &[f64], rows: usize, cols: usize) -> f64 {
    // col_above[j]: mass in rows < i, column j; suffix[j]: sum over columns > j
    let mut col_above = vec![0.0; cols];
    let mut discordant = 0.0;
    for i in 0..rows {
        let row = &mass[i * cols..(i + 1) * cols];
        let mut suffix = 0.0;
        for j in (0..cols).rev() {
            discordant += row[j] * suffix;
            suffix += col_above[j];
        }
        for j in 0..cols {
            col_above[j] += row[j];
        }
    }
    let mut aligned = 0.0;
    let mut col_sums = vec![0.0; cols];
    for i in 0..rows {
        let row = &mass[i * cols..(i + 1) * cols];
        let rs: f64 = row.iter().sum();
        aligned += rs * rs;
        for j in 0..cols {
            col_sums[j] += row[j];
            aligned -= row[j] * row[j];
        }
    }
    aligned += col_sums.iter().map(|c| c * c).sum::<f64>();
    0.5 * (2.0 * discordant + 0.5 * aligned)
}

/// Fractional overlaps of source bands (given by breakpoints) with the
/// uniform target bands `((k-1)/m, k/m]`: triples `(source, target, fraction
/// of the source band)`. A zero-width source band goes wholly to the target
/// band containing it, left-closed at the infimum.
pub(crate) fn band_overlaps(breaks: &[f64], m: usize) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(breaks.len() + m);
    let mf = m as f64;
    for i in 0..breaks.len() - 1 {
        let (a, b) = (breaks[i], breaks[i + 1]);
        let w = b - a;
        if w <= 0.0 {
            let k = ((a * mf).ceil() as usize).clamp(1, m) - 1;
            out.push((i, k, 1.0));
            continue;
        }
        let k0 = ((a * mf).floor() as usize).min(m - 1);
        let mut k = k0;
        while k < m {
            let lo = (k as f64 / mf).max(a);
            let hi = ((k + 1) as f64 / mf).min(b);
            if hi > lo {
                out.push((i, k, (hi - lo) / w));
            }
            if (k + 1) as f64 / mf >= b {
                break;
            }
            k += 1;
        }
    }
    out
}
