use anyhow::{ensure, Result};
use clap::Args;
use mallows_core::sampler::replicate_empirical_cdf;
use mallows_core::{closed_form_R, RandomStream};
use rand::RngCore;
use serde::Serialize;

use super::{ensure_finite, ensure_nonempty, ensure_unit};
use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

/// Accepted range for the std ratio between successive sizes, relative to
/// the `sqrt(n'/n)` prediction.
const SCALING_BAND: (f64, f64) = (0.8, 1.3);

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Comma-separated system sizes.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Comma-separated β values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
    /// Independent configurations per (β, n).
    #[arg(long)]
    replicas: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ConvergeConfig {
    seed: u64,
    n: Vec<usize>,
    beta: Vec<f64>,
    theta1: f64,
    theta2: f64,
    replicas: usize,
}

pub fn resolve(a: ConvergeArgs, cfg: &mut ConfigFile, seed: u64) -> Result<ConvergeConfig> {
    let c = ConvergeConfig {
        seed,
        n: cfg.pick("n", a.n, vec![2000, 8000])?,
        beta: cfg.pick("beta", a.beta, vec![-2.0, 2.0])?,
        theta1: cfg.pick("theta1", a.theta1, 0.5)?,
        theta2: cfg.pick("theta2", a.theta2, 0.5)?,
        replicas: cfg.pick("replicas", a.replicas, 200)?,
    };
    ensure_nonempty("n", &c.n)?;
    ensure_nonempty("beta", &c.beta)?;
    ensure_finite("beta", &c.beta)?;
    ensure_unit("theta1", &[c.theta1], true)?;
    ensure_unit("theta2", &[c.theta2], true)?;
    ensure!(c.n.iter().all(|&n| n >= 2), "`n` values must be at least 2");
    ensure!(c.replicas >= 1, "`replicas` must be at least 1");
    Ok(c)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

pub fn execute(c: &ConvergeConfig) -> Result<Report> {
    let columns = [
        "beta",
        "n",
        "replicas",
        "mean",
        "std",
        "R",
        "abs_err",
        "band",
        "within_band",
        "std_ratio",
    ];
    let mut r = Report::new("converge", c.seed, c, &columns)?;
    let mut root = RandomStream::new(c.seed);
    let (mut misses, mut scaling_bad) = (Vec::new(), Vec::new());
    for &beta in &c.beta {
        let exact = closed_form_R(c.theta1, c.theta2, beta);
        let mut prev: Option<(usize, f64)> = None;
        for &n in &c.n {
            let stream_seed = root.next_u64();
            let samples = replicate_empirical_cdf(n, beta, (c.theta1, c.theta2), c.replicas, stream_seed)?;
            let (mean, std) = mean_std(&samples);
            let err = (mean - exact).abs();
            let band = 3.0 * std / (c.replicas as f64).sqrt();
            let within = c.replicas < 2 || err <= band;
            if !within {
                misses.push(format!("β={beta} n={n}"));
            }
            let ratio = prev.map(|(n0, s0)| {
                let rel = (s0 / std) / (n as f64 / n0 as f64).sqrt();
                if !(SCALING_BAND.0..=SCALING_BAND.1).contains(&rel) {
                    scaling_bad.push(format!("β={beta} n={n0}->{n}: {rel:.3}"));
                }
                s0 / std
            });
            r.row(&[
                fmt_f64(beta),
                n.to_string(),
                c.replicas.to_string(),
                fmt_f64(mean),
                fmt_f64(std),
                fmt_f64(exact),
                fmt_f64(err),
                fmt_f64(band),
                within.to_string(),
                ratio.map(fmt_f64).unwrap_or_default(),
            ]);
            prev = Some((n, std));
        }
    }
    r.check(
        "within_3sigma",
        misses.is_empty(),
        if misses.is_empty() {
            "all rows".to_owned()
        } else {
            misses.join("; ")
        },
    );
    if c.n.len() > 1 && c.replicas >= 2 {
        let detail = format!(
            "std ratio over sqrt(n'/n) in [{}, {}]{}",
            SCALING_BAND.0,
            SCALING_BAND.1,
            if scaling_bad.is_empty() {
                String::new()
            } else {
                format!("; outside: {}", scaling_bad.join("; "))
            }
        );
        r.check("inverse_sqrt_scaling", scaling_bad.is_empty(), detail);
    }
    Ok(r)
}
