pub mod converge;
pub mod foursquare;
pub mod pressure;
pub mod ratefn;
pub mod rfun;
pub mod sample;

use anyhow::{ensure, Result};

/// `k·step` for `k = lo..=hi`, without accumulated rounding.
pub fn stepped(lo: i32, hi: i32, step: f64) -> Vec<f64> {
    (lo..=hi).map(|k| k as f64 * step).collect()
}

pub fn ensure_nonempty<T>(key: &str, xs: &[T]) -> Result<()> {
    ensure!(!xs.is_empty(), "`{key}` must not be empty");
    Ok(())
}

pub fn ensure_finite(key: &str, xs: &[f64]) -> Result<()> {
    ensure!(xs.iter().all(|x| x.is_finite()), "`{key}` values must be finite");
    Ok(())
}

pub fn ensure_unit(key: &str, xs: &[f64], open: bool) -> Result<()> {
    let ok = |x: f64| {
        if open {
            x > 0.0 && x < 1.0
        } else {
            (0.0..=1.0).contains(&x)
        }
    };
    ensure!(
        xs.iter().all(|&x| ok(x)),
        "`{key}` values must lie in {}",
        if open { "(0, 1)" } else { "[0, 1]" }
    );
    Ok(())
}
