use super::{band_overlaps, GridMeasure, JointCdf, MarginalCDF, RectilinearMeasure};
use crate::error::{Error, Result};

/// The push-forward of a grid measure by its marginal distribution
/// functions, kept exactly as a rectilinear measure, together with its
/// redistribution onto the uniform grid of the same resolution.
#[derive(Debug, Clone)]
pub struct Standardized {
    exact: RectilinearMeasure,
    grid: GridMeasure,
    degenerate_x: Vec<usize>,
    degenerate_y: Vec<usize>,
}

impl Standardized {
    /// The push-forward itself: same cell masses on the bands
    /// `(F_X((i-1)/m), F_X(i/m)] × (F_Y((j-1)/m), F_Y(j/m)]`.
    pub fn exact(&self) -> &RectilinearMeasure {
        &self.exact
    }

    /// The push-forward redistributed onto the uniform `m × m` grid.
    pub fn grid(&self) -> &GridMeasure {
        &self.grid
    }

    /// x-bands of the original measure carrying no mass; their images
    /// collapse to single points.
    pub fn degenerate_x(&self) -> &[usize] {
        &self.degenerate_x
    }

    pub fn degenerate_y(&self) -> &[usize] {
        &self.degenerate_y
    }

    pub fn has_degenerate_bands(&self) -> bool {
        !(self.degenerate_x.is_empty() && self.degenerate_y.is_empty())
    }
}

impl JointCdf for Standardized {
    fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        self.exact.joint_cdf(x, y)
    }
}

/// Redistributes a rectilinear measure onto the uniform `m × m` grid by
/// exact band overlaps.
pub(crate) fn regrid(r: &RectilinearMeasure, m: usize) -> Result<GridMeasure> {
    let (rows, cols) = r.shape();
    let ox = band_overlaps(r.x_breaks(), m);
    let oy = band_overlaps(r.y_breaks(), m);
    let src = r.masses();
    let mut tmp = vec![0.0; m * cols];
    for &(i, k, f) in &ox {
        for j in 0..cols {
            tmp[k * cols + j] += f * src[i * cols + j];
        }
    }
    let mut out = vec![0.0; m * m];
    for k in 0..m {
        for &(j, l, f) in &oy {
            out[k * m + l] += f * tmp[k * cols + j];
        }
    }
    debug_assert_eq!(rows, r.x_breaks().len() - 1);
    GridMeasure::from_weights(m, out)
}

/// Push-forward of `mu` by `(F_X, F_Y)`: a measure with uniform marginals.
pub fn standardize(mu: &GridMeasure) -> Result<Standardized> {
    let fx = mu.marginal_x();
    let fy = mu.marginal_y();
    let exact = RectilinearMeasure::new(fx.values().to_vec(), fy.values().to_vec(), mu.masses().to_vec())?;
    let grid = regrid(&exact, mu.m())?;
    Ok(Standardized {
        exact,
        grid,
        degenerate_x: fx.degenerate_bands(),
        degenerate_y: fy.degenerate_bands(),
    })
}

/// Push-forward of a measure with uniform marginals by `(G_X^I, G_Y^I)`,
/// discretized on the grid of the two marginals (which must agree in size).
pub fn renormalize<C: JointCdf + ?Sized>(nu0: &C, gx: &MarginalCDF, gy: &MarginalCDF) -> Result<GridMeasure> {
    let m = gx.m();
    if gy.m() != m {
        return Err(Error::InvalidCdf(format!("marginal grids differ: {} vs {}", m, gy.m())));
    }
    for k in 0..=m {
        let u = k as f64 / m as f64;
        let (cx, cy) = (nu0.joint_cdf(u, 1.0), nu0.joint_cdf(1.0, u));
        if (cx - u).abs() > 1e-8 || (cy - u).abs() > 1e-8 {
            return Err(Error::InvalidMeasure("marginals are not uniform".into()));
        }
    }
    // ν([0,G^I(a)] × [0,G^I(b)]) evaluated at grid corners a = i/m, b = j/m
    // equals ν⁰([0,G_X(i/m)] × [0,G_Y(j/m)]).
    let (vx, vy) = (gx.values(), gy.values());
    let mut corner = vec![0.0; (m + 1) * (m + 1)];
    for i in 0..=m {
        for j in 0..=m {
            corner[i * (m + 1) + j] = nu0.joint_cdf(vx[i], vy[j]);
        }
    }
    let c = |i: usize, j: usize| corner[i * (m + 1) + j];
    let mass = (0..m * m)
        .map(|k| {
            let (i, j) = (k / m, k % m);
            (c(i + 1, j + 1) - c(i, j + 1) - c(i + 1, j) + c(i, j)).max(0.0)
        })
        .collect();
    GridMeasure::from_weights(m, mass)
}
