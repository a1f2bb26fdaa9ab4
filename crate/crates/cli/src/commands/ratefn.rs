use std::path::PathBuf;

use anyhow::{ensure, Context, Result};
use clap::Args;
use mallows_core::{pressure, GridMeasure, LimitMeasure};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{ensure_finite, ensure_nonempty};
use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

const NONNEG_TOL: f64 = 1e-6;
const UNIFORM_TOL: f64 = 1e-10;
const EQUILIBRIUM_TOL: f64 = 5e-3;
const EQUILIBRIUM_MIN_M: usize = 256;

#[derive(Debug, Args)]
pub struct RatefnArgs {
    /// Comma-separated β values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    /// Comma-separated grid resolutions for the built-in measures.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Score this grid measure (CSV as written by the library) as well.
    #[arg(long)]
    grid: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct RatefnConfig {
    seed: u64,
    beta: Vec<f64>,
    m: Vec<usize>,
    grid: Option<PathBuf>,
    grid_sha256: Option<String>,
    #[serde(skip)]
    input: Option<GridMeasure>,
}

pub fn resolve(a: RatefnArgs, cfg: &mut ConfigFile, seed: u64) -> Result<RatefnConfig> {
    let mut c = RatefnConfig {
        seed,
        beta: cfg.pick("beta", a.beta, vec![-4.0, -1.0, 2.0, 5.0])?,
        m: cfg.pick("m", a.m, vec![64, 128, 256])?,
        grid: cfg.pick("grid", a.grid.map(Some), None)?,
        grid_sha256: None,
        input: None,
    };
    ensure_nonempty("beta", &c.beta)?;
    ensure_finite("beta", &c.beta)?;
    ensure!(c.m.iter().all(|&m| m >= 1), "`m` values must be positive");
    if let Some(p) = &c.grid {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        c.grid_sha256 = Some(hex::encode(Sha256::digest(text.as_bytes())));
        c.input = Some(GridMeasure::from_csv_str(&text).with_context(|| format!("parsing {}", p.display()))?);
    }
    Ok(c)
}

pub fn execute(c: &RatefnConfig) -> Result<Report> {
    let columns = ["beta", "m", "measure", "entropy", "energy", "pressure", "rate"];
    let mut r = Report::new("ratefn", c.seed, c, &columns)?;
    let (mut min_rate, mut uni_err) = (f64::INFINITY, 0.0f64);
    let mut eq_bad = Vec::new();
    let mut increasing = Vec::new();
    let mut push = |r: &mut Report, beta: f64, name: &str, mu: &GridMeasure| {
        let rate = mu.rate_function(beta);
        min_rate = min_rate.min(rate);
        r.row(&[
            fmt_f64(beta),
            mu.m().to_string(),
            name.to_owned(),
            fmt_f64(mu.relative_entropy()),
            fmt_f64(mu.energy()),
            fmt_f64(pressure(beta)),
            fmt_f64(rate),
        ]);
        rate
    };
    let mut ms = c.m.clone();
    ms.sort_unstable();
    for &beta in &c.beta {
        for &m in &c.m {
            let rate = push(&mut r, beta, "uniform", &GridMeasure::uniform(m));
            uni_err = uni_err.max((rate - (0.25 * beta + pressure(beta))).abs());
        }
        let mut prev = None::<(usize, f64)>;
        for &m in &ms {
            let eq = GridMeasure::from_cdf(m, &LimitMeasure::new(beta))?;
            let rate = push(&mut r, beta, "equilibrium", &eq);
            if m >= EQUILIBRIUM_MIN_M && rate > EQUILIBRIUM_TOL {
                eq_bad.push(format!("β={beta} m={m}: {rate:e}"));
            }
            if let Some((m0, r0)) = prev {
                if m > m0 && rate >= r0 {
                    increasing.push(format!("β={beta} m={m0}->{m}"));
                }
            }
            prev = Some((m, rate));
        }
        if let Some(mu) = &c.input {
            push(&mut r, beta, "input", mu);
        }
    }
    r.check(
        "nonnegative",
        min_rate >= -NONNEG_TOL,
        format!("min rate = {min_rate:e}"),
    );
    r.check(
        "uniform_identity",
        uni_err <= UNIFORM_TOL,
        format!("max |I(uniform) - β/4 - p(β)| = {uni_err:e}"),
    );
    if ms.iter().any(|&m| m >= EQUILIBRIUM_MIN_M) {
        let detail = if eq_bad.is_empty() {
            format!("rate ≤ {EQUILIBRIUM_TOL} for m ≥ {EQUILIBRIUM_MIN_M}")
        } else {
            format!("above {EQUILIBRIUM_TOL}: {}", eq_bad.join("; "))
        };
        r.check("equilibrium_small", eq_bad.is_empty(), detail);
    }
    if ms.len() > 1 {
        let detail = if increasing.is_empty() {
            "rate decreases under refinement".to_owned()
        } else {
            format!("not decreasing: {}", increasing.join("; "))
        };
        r.check("equilibrium_decreasing", increasing.is_empty(), detail);
    }
    Ok(r)
}
