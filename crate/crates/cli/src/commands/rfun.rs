use anyhow::Result;
use clap::Args;
use mallows_core::foursquare::{diagonal_interval, quadrant_areas};
use mallows_core::{closed_form_R, density_rho, phi, pressure, solve_critical_t, t_pressure, DiagonalParam};
use serde::Serialize;

use super::{ensure_finite, ensure_nonempty, ensure_unit, stepped};
use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

const SOLVER_TOL: f64 = 1e-12;
const PHI_TOL: f64 = 1e-8;

#[derive(Debug, Args)]
pub struct RfunArgs {
    /// Comma-separated θ₁ values in [0, 1].
    #[arg(long, value_delimiter = ',')]
    theta1: Option<Vec<f64>>,
    /// Comma-separated θ₂ values in [0, 1].
    #[arg(long, value_delimiter = ',')]
    theta2: Option<Vec<f64>>,
    /// Comma-separated β values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct RfunConfig {
    seed: u64,
    theta1: Vec<f64>,
    theta2: Vec<f64>,
    beta: Vec<f64>,
}

pub fn resolve(a: RfunArgs, cfg: &mut ConfigFile, seed: u64) -> Result<RfunConfig> {
    let thetas: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let c = RfunConfig {
        seed,
        theta1: cfg.pick("theta1", a.theta1, thetas.clone())?,
        theta2: cfg.pick("theta2", a.theta2, thetas)?,
        beta: cfg.pick("beta", a.beta, stepped(-3, 3, 2.0))?,
    };
    for (k, xs) in [("theta1", &c.theta1), ("theta2", &c.theta2), ("beta", &c.beta)] {
        ensure_nonempty(k, xs)?;
        ensure_finite(k, xs)?;
    }
    ensure_unit("theta1", &c.theta1, false)?;
    ensure_unit("theta2", &c.theta2, false)?;
    Ok(c)
}

/// Φ on the boundary of the square, where the diagonal interval is a single
/// point and the zero-area quadrants carry no mass.
fn boundary_phi(a: f64, b: f64, t: f64, beta: f64) -> f64 {
    let areas = quadrant_areas(a, b);
    let mut masses = [t, a - t, b - t, 1.0 - a - b + t];
    for (m, area) in masses.iter_mut().zip(areas) {
        // what lands in an empty quadrant is rounding residue
        if area == 0.0 || *m < 0.0 {
            *m = 0.0;
        }
    }
    let mut v = pressure(beta);
    for (m, area) in masses.iter().zip(areas) {
        if *m > 0.0 {
            v += m * (m / area).ln();
        }
        v += t_pressure(*m, beta);
    }
    for s in [a, b, 1.0 - a, 1.0 - b] {
        v -= t_pressure(s, beta);
    }
    v + beta * masses[1] * masses[2]
}

fn solver_and_phi(a: f64, b: f64, beta: f64, r: f64) -> Result<(f64, f64)> {
    let interior = a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0;
    if interior {
        Ok((solve_critical_t(a, b, beta)?, phi(&DiagonalParam::new(a, b, r)?, beta)))
    } else {
        let (_, hi) = diagonal_interval(a, b);
        Ok((hi, boundary_phi(a, b, r, beta)))
    }
}

pub fn execute(c: &RfunConfig) -> Result<Report> {
    let columns = ["theta1", "theta2", "beta", "R_closed", "R_solver", "rho", "phi_at_R"];
    let mut r = Report::new("rfun", c.seed, c, &columns)?;
    let (mut max_gap, mut max_phi) = (0.0f64, 0.0f64);
    let mut failure = None;
    'grid: for &a in &c.theta1 {
        for &b in &c.theta2 {
            for &beta in &c.beta {
                let rc = closed_form_R(a, b, beta);
                let (rs, ph) = solver_and_phi(a, b, beta, rc)?;
                let rho = density_rho(a, b, beta);
                let row = [a, b, beta, rc, rs, rho, ph].map(fmt_f64);
                r.row(&row);
                max_gap = max_gap.max((rc - rs).abs());
                max_phi = max_phi.max(ph.abs());
                if !((rc - rs).abs() <= SOLVER_TOL && ph.abs() <= PHI_TOL) {
                    failure = Some(row.join(","));
                    break 'grid;
                }
            }
        }
    }
    if let Some(row) = &failure {
        eprintln!("rfun: assertion failed at row {row}");
    }
    r.check(
        "solver_agreement",
        max_gap <= SOLVER_TOL,
        format!("max |R_closed - R_solver| = {max_gap:e}"),
    );
    r.check(
        "variational_zero",
        max_phi <= PHI_TOL,
        format!("max |Φ(R)| = {max_phi:e}"),
    );
    if let Some(row) = failure {
        r.metric("failing_row", row);
    }
    Ok(r)
}
