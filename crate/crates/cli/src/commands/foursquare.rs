use anyhow::{ensure, Result};
use clap::Args;
use mallows_core::foursquare::{discrete_four_square_log_prob, quadrant_areas, FourSquareOracle, ORACLE_MAX_N};
use mallows_core::SplitCounts;
use serde::Serialize;

use super::ensure_unit;
use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

const SUM_TOL: f64 = 1e-12;
const RELERR_TOL: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct FoursquareArgs {
    /// Number of points; at most 9 while the enumeration oracle is on.
    #[arg(long)]
    n: Option<usize>,
    /// Inverse temperature; the permutation weight is q = exp(-β/(n-1)).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
    /// Skip the enumeration oracle, lifting the size limit.
    #[arg(long)]
    no_oracle: bool,
}

impl FoursquareArgs {
    /// Rejects an oracle run beyond the enumeration budget.
    pub fn check_budget(&self) -> std::result::Result<(), String> {
        match self.n {
            Some(n) if !self.no_oracle && n > ORACLE_MAX_N => Err(format!(
                "--n {n} exceeds the oracle budget of {ORACLE_MAX_N}; pass --no-oracle for larger n"
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FoursquareConfig {
    seed: u64,
    n: usize,
    beta: f64,
    theta1: f64,
    theta2: f64,
    oracle: bool,
}

pub fn resolve(a: FoursquareArgs, cfg: &mut ConfigFile, seed: u64) -> Result<FoursquareConfig> {
    let c = FoursquareConfig {
        seed,
        n: cfg.pick("n", a.n, 6)?,
        beta: cfg.pick("beta", a.beta, 1.0)?,
        theta1: cfg.pick("theta1", a.theta1, 0.5)?,
        theta2: cfg.pick("theta2", a.theta2, 0.5)?,
        oracle: cfg.pick("oracle", a.no_oracle.then_some(false), true)?,
    };
    ensure!(c.n >= 2, "`n` must be at least 2");
    ensure!(
        !c.oracle || c.n <= ORACLE_MAX_N,
        "n = {} exceeds the oracle budget of {ORACLE_MAX_N}",
        c.n
    );
    ensure!(c.beta.is_finite(), "`beta` must be finite");
    ensure_unit("theta1", &[c.theta1], false)?;
    ensure_unit("theta2", &[c.theta2], false)?;
    Ok(c)
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Multinomial probability of the counts under independent uniform points.
fn multinomial(counts: &SplitCounts, theta1: f64, theta2: f64, n: usize) -> f64 {
    let mut lp = ln_factorial(n);
    for (k, area) in counts.as_array().into_iter().zip(quadrant_areas(theta1, theta2)) {
        lp -= ln_factorial(k);
        if k > 0 {
            lp += k as f64 * area.ln();
        }
    }
    lp.exp()
}

pub fn execute(c: &FoursquareConfig) -> Result<Report> {
    let columns = ["n11", "n12", "n21", "n22", "p_formula", "p_oracle", "relerr"];
    let mut r = Report::new("foursquare-exact", c.seed, c, &columns)?;
    let oracle = if c.oracle {
        Some(FourSquareOracle::new(c.n, c.beta)?)
    } else {
        None
    };
    let (mut total, mut max_rel, mut max_indep) = (0.0, 0.0f64, 0.0f64);
    for counts in SplitCounts::all(c.n) {
        let pf = discrete_four_square_log_prob(&counts, c.theta1, c.theta2, c.n, c.beta)?.exp();
        total += pf;
        let [n11, n12, n21, n22] = counts.as_array();
        let mut row = vec![
            n11.to_string(),
            n12.to_string(),
            n21.to_string(),
            n22.to_string(),
            fmt_f64(pf),
        ];
        if let Some(o) = &oracle {
            let po = o.prob(&counts, c.theta1, c.theta2)?;
            let rel = if po == pf { 0.0 } else { (pf - po).abs() / po.abs() };
            max_rel = max_rel.max(rel);
            row.extend([fmt_f64(po), fmt_f64(rel)]);
        } else {
            row.extend([String::new(), String::new()]);
        }
        if c.beta == 0.0 {
            let pm = multinomial(&counts, c.theta1, c.theta2, c.n);
            max_indep = max_indep.max((pf - pm).abs() / pm.max(f64::MIN_POSITIVE));
        }
        r.row(&row);
    }
    r.check(
        "sums_to_one",
        (total - 1.0).abs() <= SUM_TOL,
        format!("Σ p_formula = {total}"),
    );
    if oracle.is_some() {
        r.check(
            "matches_oracle",
            max_rel <= RELERR_TOL,
            format!("max relerr = {max_rel:e}"),
        );
        r.metric("max_relerr", max_rel);
    }
    if c.beta == 0.0 {
        r.check(
            "multinomial_at_zero_beta",
            max_indep <= RELERR_TOL,
            format!("max relerr = {max_indep:e}"),
        );
    }
    Ok(r)
}
