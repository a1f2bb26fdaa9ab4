//! The four-square problem: the cost `Φ̃_β` of prescribing the masses of the
//! four quadrants at `(θ₁, θ₂)`, its restriction `Φ_β` to the diagonal
//! parameter, the closed-form minimizer `R_β`, the limiting density `ρ_β`,
//! and the exact discrete four-square probability.

mod closed_form;
mod discrete;

pub use closed_form::{closed_form_R, density_rho, mixed_partial_r, LimitMeasure};
pub use discrete::{
    discrete_four_square_log_prob, discrete_four_square_oracle, discrete_four_square_prob, round_counts,
    FourSquareOracle, ORACLE_MAX_N,
};

use crate::error::{Error, Result};
use crate::pressure::{pressure, t_pressure};
use crate::special::{ln_sinhc, x_coth_x, KahanSum};

const SUM_TOLERANCE: f64 = 1e-12;

fn check_theta(theta: f64) -> Result<f64> {
    if theta > 0.0 && theta < 1.0 {
        Ok(theta)
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

/// Areas `|Λ_ij|` of the quadrants `L_i(θ₁) × L_j(θ₂)` in the order
/// `11, 12, 21, 22`.
pub fn quadrant_areas(theta1: f64, theta2: f64) -> [f64; 4] {
    [
        theta1 * theta2,
        theta1 * (1.0 - theta2),
        (1.0 - theta1) * theta2,
        (1.0 - theta1) * (1.0 - theta2),
    ]
}

/// Quadrant masses `t_ij` prescribed at an interior split point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourSplit {
    theta1: f64,
    theta2: f64,
    t: [f64; 4],
}

impl FourSplit {
    pub fn new(theta1: f64, theta2: f64, t11: f64, t12: f64, t21: f64, t22: f64) -> Result<Self> {
        check_theta(theta1)?;
        check_theta(theta2)?;
        let t = [t11, t12, t21, t22];
        if t.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidSplit(format!("masses must be nonnegative, got {t:?}")));
        }
        let s: f64 = t.iter().sum();
        if (s - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidSplit(format!("masses sum to {s}")));
        }
        Ok(Self { theta1, theta2, t })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// `[t11, t12, t21, t22]`.
    pub fn masses(&self) -> [f64; 4] {
        self.t
    }
}

/// `Φ̃_β(θ₁, θ₂; t₁₁, t₁₂, t₂₁, t₂₂)`.
pub fn phi_tilde(split: &FourSplit, beta: f64) -> f64 {
    let [t11, t12, t21, t22] = split.t;
    let areas = quadrant_areas(split.theta1, split.theta2);
    let mut acc = KahanSum::new();
    acc.add(pressure(beta));
    for (t, a) in split.t.iter().zip(areas) {
        if *t > 0.0 {
            acc.add(t * (t / a).ln());
        }
        acc.add(t_pressure(*t, beta));
    }
    for s in [t11 + t12, t11 + t21, t12 + t22, t21 + t22] {
        acc.add(-t_pressure(s, beta));
    }
    acc.add(beta * t12 * t21);
    acc.value()
}

/// The diagonal parameter `t = t₁₁` with the induced quadrant masses
/// `(t, θ₁-t, θ₂-t, 1-θ₁-θ₂+t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalParam {
    theta1: f64,
    theta2: f64,
    t: f64,
}

/// `I_{θ₁,θ₂} = [max(0, θ₁+θ₂-1), min(θ₁, θ₂)]`.
pub fn diagonal_interval(theta1: f64, theta2: f64) -> (f64, f64) {
    ((theta1 + theta2 - 1.0).max(0.0), theta1.min(theta2))
}

impl DiagonalParam {
    pub fn new(theta1: f64, theta2: f64, t: f64) -> Result<Self> {
        check_theta(theta1)?;
        check_theta(theta2)?;
        let (lo, hi) = diagonal_interval(theta1, theta2);
        if !(t >= lo && t <= hi) {
            return Err(Error::TOutsideInterval { t, lo, hi });
        }
        Ok(Self { theta1, theta2, t })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn interval(&self) -> (f64, f64) {
        diagonal_interval(self.theta1, self.theta2)
    }

    /// `[t11, t12, t21, t22]`, with rounding below zero clipped.
    pub fn masses(&self) -> [f64; 4] {
        let (a, b, t) = (self.theta1, self.theta2, self.t);
        [t, (a - t).max(0.0), (b - t).max(0.0), ((1.0 - a) - (b - t)).max(0.0)]
    }

    pub fn split(&self) -> FourSplit {
        FourSplit {
            theta1: self.theta1,
            theta2: self.theta2,
            t: self.masses(),
        }
    }
}

/// `Φ_β` written with the marginal sums already collapsed to `θ₁, θ₂,
/// 1-θ₁, 1-θ₂`.
fn phi_collapsed(param: &DiagonalParam, beta: f64) -> f64 {
    let (a, b) = (param.theta1, param.theta2);
    let t = param.masses();
    let areas = quadrant_areas(a, b);
    let mut acc = KahanSum::new();
    acc.add(pressure(beta));
    for s in [a, b, 1.0 - a, 1.0 - b] {
        acc.add(-t_pressure(s, beta));
    }
    for (tij, area) in t.iter().zip(areas) {
        if *tij > 0.0 {
            acc.add(tij * (tij / area).ln());
        }
        acc.add(t_pressure(*tij, beta));
    }
    acc.add(beta * t[1] * t[2]);
    acc.value()
}

/// `Φ_β(θ₁, θ₂; t)`, evaluated through `Φ̃_β` and checked against the
/// collapsed form.
pub fn phi(param: &DiagonalParam, beta: f64) -> f64 {
    let v = phi_tilde(&param.split(), beta);
    let w = phi_collapsed(param, beta);
    assert!(
        (v - w).abs() <= 1e-10 * v.abs().max(1.0),
        "Φ forms disagree at {param:?}, β={beta}: {v} vs {w}"
    );
    v
}

/// `∂Φ_β/∂t = ln[(1-e^{-βt₁₁})(1-e^{-βt₂₂}) / ((e^{βt₁₂}-1)(e^{βt₂₁}-1))]`.
///
/// Evaluated as `ln(t₁₁t₂₂/(t₁₂t₂₁)) - β/2 + Σ ± ln(sinh(βt_ij/2)/(βt_ij/2))`,
/// which is smooth through `β = 0`. Returns `-∞` when `t₁₁` or `t₂₂`
/// vanishes and `+∞` when `t₁₂` or `t₂₁` does.
pub fn phi_dt(param: &DiagonalParam, beta: f64) -> f64 {
    let [t11, t12, t21, t22] = param.masses();
    if t11 == 0.0 || t22 == 0.0 {
        return f64::NEG_INFINITY;
    }
    if t12 == 0.0 || t21 == 0.0 {
        return f64::INFINITY;
    }
    let h = 0.5 * beta;
    (t11.ln() + t22.ln() - t12.ln() - t21.ln()) - h
        + (ln_sinhc(h * t11) + ln_sinhc(h * t22) - ln_sinhc(h * t12) - ln_sinhc(h * t21))
}

/// `∂²Φ_β/∂t² = Σ β / (2 tanh(βt_ij/2))`, which is `Σ 1/t_ij` at `β = 0`.
pub fn phi_dtt(param: &DiagonalParam, beta: f64) -> f64 {
    let t = param.masses();
    if t.contains(&0.0) {
        return f64::INFINITY;
    }
    t.iter().map(|&x| x_coth_x(0.5 * beta * x) / x).sum()
}

const SOLVER_MAX_ITER: usize = 200;
const SOLVER_TOL: f64 = 1e-13;

/// The unique zero of `∂Φ_β/∂t` on the open interval, by Newton's method
/// kept inside a sign-change bracket.
pub fn solve_critical_t(theta1: f64, theta2: f64, beta: f64) -> Result<f64> {
    check_theta(theta1)?;
    check_theta(theta2)?;
    let (mut lo, mut hi) = diagonal_interval(theta1, theta2);
    let dt = |t: f64| {
        let p = DiagonalParam { theta1, theta2, t };
        (phi_dt(&p, beta), phi_dtt(&p, beta))
    };
    let mut t = theta1 * theta2;
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..SOLVER_MAX_ITER {
        let (g, gp) = dt(t);
        if g.abs() < SOLVER_TOL {
            return Ok(t);
        }
        if g < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let newton = t - g / gp;
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == t || hi - lo <= f64::EPSILON * t.abs() {
            // adjacent floats: no representable point does better
            return Ok(t);
        }
        t = next;
    }
    Err(Error::NonConvergence {
        iterations: SOLVER_MAX_ITER,
        last: t,
    })
}

/// Right-hand side of the two-square bound for masses `t₁, t₂` supported in
/// an interval of length `θ`:
/// `-(t₁+t₂) ln θ + t₁p(βt₁) + t₂p(βt₂) - (t₁+t₂)p(β(t₁+t₂))`.
pub fn two_square_bound_rhs(t1: f64, t2: f64, theta: f64, beta: f64) -> f64 {
    let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    -(t1 + t2) * theta.ln() + t_pressure(t1, beta) + t_pressure(t2, beta) - t_pressure(t1 + t2, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn param(a: f64, b: f64, t: f64) -> DiagonalParam {
        DiagonalParam::new(a, b, t).unwrap()
    }

    #[test]
    fn split_validation() {
        assert!(FourSplit::new(0.0, 0.5, 0.25, 0.25, 0.25, 0.25).is_err());
        assert!(FourSplit::new(0.5, 1.0, 0.25, 0.25, 0.25, 0.25).is_err());
        assert!(FourSplit::new(0.5, 0.5, 0.3, 0.25, 0.25, 0.25).is_err());
        assert!(FourSplit::new(0.5, 0.5, -0.1, 0.35, 0.5, 0.25).is_err());
        assert!(DiagonalParam::new(0.3, 0.4, 0.31).is_err());
        assert!(DiagonalParam::new(0.8, 0.7, 0.4).is_err());
        assert!(DiagonalParam::new(0.8, 0.7, 0.5).is_ok());
    }

    #[test]
    fn phi_tilde_at_zero_beta_is_kl() {
        let s = FourSplit::new(0.3, 0.6, 0.1, 0.2, 0.4, 0.3).unwrap();
        let areas = quadrant_areas(0.3, 0.6);
        let kl: f64 = s.masses().iter().zip(areas).map(|(t, a)| t * (t / a).ln()).sum();
        assert!((phi_tilde(&s, 0.0) - kl).abs() < 1e-15);
        let [a, b, c, d] = areas;
        let at_min = FourSplit::new(0.3, 0.6, a, b, c, d).unwrap();
        assert!(phi_tilde(&at_min, 0.0).abs() < 1e-15);
    }

    #[test]
    fn phi_vanishes_at_r() {
        for &(a, b, beta) in &[(0.5, 0.5, 2.0), (0.2, 0.7, -4.0), (0.9, 0.3, 6.0), (0.5, 0.5, 0.0)] {
            let r = closed_form_R(a, b, beta);
            assert!(phi(&param(a, b, r), beta).abs() < 1e-10);
        }
    }

    #[test]
    fn endpoints_are_finite() {
        for &(a, b) in &[(0.3, 0.4), (0.8, 0.7), (0.5, 0.5)] {
            let (lo, hi) = diagonal_interval(a, b);
            for beta in [-3.0, 0.0, 3.0] {
                assert!(phi(&param(a, b, lo), beta).is_finite());
                assert!(phi(&param(a, b, hi), beta).is_finite());
                assert_eq!(phi_dt(&param(a, b, lo), beta), f64::NEG_INFINITY);
                assert_eq!(phi_dt(&param(a, b, hi), beta), f64::INFINITY);
            }
        }
    }

    #[test]
    fn derivative_matches_explicit_log_form() {
        for &(a, b, t, beta) in &[(0.3, 0.6, 0.2, 2.5), (0.7, 0.5, 0.4, -3.0), (0.5, 0.5, 0.1, 0.7)] {
            let p = param(a, b, t);
            let [t11, t12, t21, t22] = p.masses();
            let e = |x: f64| -(-beta * x).exp_m1();
            let direct = ((e(t11) * e(t22)) / ((beta * t12).exp_m1() * (beta * t21).exp_m1())).ln();
            assert!((phi_dt(&p, beta) - direct).abs() < 1e-13);
        }
        let p = param(0.4, 0.6, 0.3);
        let [t11, t12, t21, t22] = p.masses();
        assert!((phi_dt(&p, 0.0) - (t11 * t22 / (t12 * t21)).ln()).abs() < 1e-15);
    }

    #[test]
    fn second_derivative_at_zero_beta() {
        let p = param(0.4, 0.6, 0.3);
        let expect: f64 = p.masses().iter().map(|t| 1.0 / t).sum();
        assert!((phi_dtt(&p, 0.0) - expect).abs() < 1e-13);
    }

    #[test]
    fn solver_basics() {
        assert!((solve_critical_t(0.3, 0.7, 0.0).unwrap() - 0.21).abs() < 1e-15);
        let r = solve_critical_t(0.5, 0.5, 2.0).unwrap();
        assert!((r - 0.310_057_253_479_138_76).abs() < 1e-14);
        for &(a, b, beta) in &[(0.2, 0.9, 5.0), (0.6, 0.1, -6.0), (0.35, 0.35, 1e-8)] {
            let s1 = solve_critical_t(a, b, beta).unwrap();
            let s2 = solve_critical_t(b, a, beta).unwrap();
            assert!((s1 - s2).abs() < 1e-14);
            assert!((s1 - closed_form_R(a, b, beta)).abs() < 1e-12);
        }
        assert!(solve_critical_t(1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn two_square_rhs_examples() {
        assert!(two_square_bound_rhs(0.2, 0.3, 1.0, 0.0).abs() < 1e-15);
        assert!((two_square_bound_rhs(0.2, 0.3, 0.5, 0.0) - 0.5 * 2f64.ln()).abs() < 1e-15);
        for beta in [-2.0, 3.0] {
            let a = two_square_bound_rhs(0.2, 0.45, 0.6, beta);
            let b = two_square_bound_rhs(0.45, 0.2, 0.6, beta);
            assert_eq!(a, b);
        }
    }
}
