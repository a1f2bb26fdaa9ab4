use anyhow::Result;
use clap::Args;
use mallows_core::{finite_volume_pressure, pressure, q_stirling_remainder};
use serde::Serialize;

use super::{ensure_finite, ensure_nonempty, stepped};
use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

#[derive(Debug, Args)]
pub struct PressureArgs {
    /// Comma-separated β values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta_grid: Option<Vec<f64>>,
    /// System size for the finite-volume columns.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct PressureConfig {
    seed: u64,
    beta_grid: Vec<f64>,
    n: usize,
}

pub fn resolve(a: PressureArgs, cfg: &mut ConfigFile, seed: u64) -> Result<PressureConfig> {
    let c = PressureConfig {
        seed,
        beta_grid: cfg.pick("beta_grid", a.beta_grid, stepped(-10, 10, 0.5))?,
        n: cfg.pick("n", a.n, 1000)?,
    };
    ensure_nonempty("beta_grid", &c.beta_grid)?;
    ensure_finite("beta_grid", &c.beta_grid)?;
    anyhow::ensure!(c.n >= 2, "`n` must be at least 2");
    Ok(c)
}

pub fn execute(c: &PressureConfig) -> Result<Report> {
    let mut r = Report::new("pressure", c.seed, c, &["beta", "p", "p_n", "remainder"])?;
    let mut max_gap = 0.0f64;
    let mut max_rem = 0.0f64;
    let mut finite = true;
    for &beta in &c.beta_grid {
        let p = pressure(beta);
        let pn = finite_volume_pressure(c.n, beta)?;
        let rem = q_stirling_remainder(c.n, beta)?;
        finite &= p.is_finite() && pn.is_finite() && rem.is_finite();
        max_gap = max_gap.max((pn - p).abs());
        max_rem = max_rem.max(rem.abs());
        r.row(&[fmt_f64(beta), fmt_f64(p), fmt_f64(pn), fmt_f64(rem)]);
    }
    r.check("finite", finite, "every column is finite");
    if c.beta_grid.contains(&0.0) {
        let p0 = pressure(0.0);
        r.check("p_zero", p0 == 0.0, format!("p(0) = {p0}"));
    }
    let mut worst = None::<(f64, f64)>;
    for &beta in c.beta_grid.iter().filter(|&&b| b > 0.0 && c.beta_grid.contains(&-b)) {
        let err = (pressure(-beta) - pressure(beta) - 0.5 * beta).abs() / (1.0 + beta);
        if worst.is_none_or(|(_, w)| err > w) {
            worst = Some((beta, err));
        }
    }
    if let Some((beta, err)) = worst {
        r.check(
            "reflection",
            err <= 1e-12,
            format!("max |p(-β) - p(β) - β/2|/(1+|β|) = {err:e} at β = {beta}"),
        );
    }
    r.metric("max_abs_p_n_minus_p", max_gap);
    r.metric("max_abs_remainder", max_rem);
    Ok(r)
}
