use anyhow::{ensure, Result};
use clap::Args;
use mallows_core::sampler::configuration_permutation;
use mallows_core::{
    closed_form_R, configuration_log_density, empirical_cdf_at, inv, sample_configuration, RandomStream,
};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::report::{fmt_f64, Report};

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Number of points.
    #[arg(long)]
    n: Option<usize>,
    /// Inverse temperature.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SampleConfig {
    seed: u64,
    n: usize,
    beta: f64,
}

pub fn resolve(a: SampleArgs, cfg: &mut ConfigFile, seed: u64) -> Result<SampleConfig> {
    let c = SampleConfig {
        seed,
        n: cfg.pick("n", a.n, 1000)?,
        beta: cfg.pick("beta", a.beta, 0.0)?,
    };
    ensure!(c.n >= 2, "`n` must be at least 2");
    ensure!(c.beta.is_finite(), "`beta` must be finite");
    Ok(c)
}

pub fn execute(c: &SampleConfig) -> Result<Report> {
    let mut rng = RandomStream::new(c.seed);
    let cfg = sample_configuration(c.n, c.beta, &mut rng)?;
    let mut r = Report::new("sample", c.seed, c, &["index", "x", "y"])?;
    for (k, &(x, y)) in cfg.points().iter().enumerate() {
        r.row(&[k.to_string(), fmt_f64(x), fmt_f64(y)]);
    }

    let (xs, ys): (Vec<f64>, Vec<f64>) = cfg.points().iter().copied().unzip();
    let in_square = xs.iter().chain(&ys).all(|v| (0.0..=1.0).contains(v));
    r.check("in_unit_square", in_square, "all coordinates in [0, 1]");
    let distinct = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[0] < w[1])
    };
    r.check(
        "distinct_coordinates",
        distinct(&xs) && distinct(&ys),
        "x and y values pairwise distinct",
    );

    let pairs = (c.n * (c.n - 1) / 2) as f64;
    r.metric(
        "discordant_fraction",
        inv(&configuration_permutation(&cfg)) as f64 / pairs,
    );
    r.metric("log_density", configuration_log_density(&cfg, c.beta)?);
    r.metric("empirical_cdf_at_half", empirical_cdf_at(&cfg, 0.5, 0.5));
    r.metric("limit_cdf_at_half", closed_form_R(0.5, 0.5, c.beta));
    Ok(r)
}
