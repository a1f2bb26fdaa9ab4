use crate::measures::JointCdf;
use crate::special::{ln_abs_expm1, log_add_exp};

const SERIES_BELOW: f64 = 1e-6;
const LN1P_BETA_MAX: f64 = 50.0;

/// `-expm1(-x) = 1 - e^{-x}`.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// `ln|1 - e^{-βx}|`.
fn ln_abs_one_minus_exp(beta: f64, x: f64) -> f64 {
    // |1 - e^{-βx}| = e^{-βx} |e^{βx} - 1|
    if beta * x > 0.0 {
        (one_minus_exp(beta * x)).ln()
    } else {
        -beta * x + ln_abs_expm1(beta * x)
    }
}

/// `ln|D|` for `D = (1-e^{-β}) - (1-e^{-βx})(1-e^{-βy})`, written as a sum of
/// same-signed terms so that no cancellation occurs.
fn ln_abs_denominator(x: f64, y: f64, beta: f64) -> f64 {
    // symmetric in (x, y); fix an order so the rounding is too
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    if beta > 0.0 {
        // D = e^{-βx}(1-e^{-βy}) + e^{-βy}(1-e^{-β(1-y)})
        let a = -beta * x + ln_abs_one_minus_exp(beta, y);
        let b = if y < 1.0 {
            -beta * y + ln_abs_one_minus_exp(beta, 1.0 - y)
        } else {
            f64::NEG_INFINITY
        };
        log_add_exp(a, b)
    } else {
        // both (1-e^{-β}) and -(1-e^{-βx})(1-e^{-βy}) are negative
        let c = ln_abs_one_minus_exp(beta, 1.0);
        let ab = ln_abs_one_minus_exp(beta, x) + ln_abs_one_minus_exp(beta, y);
        log_add_exp(c, ab)
    }
}

/// `R_β(θ₁, θ₂) = -(1/β) ln(1 - (1-e^{-βθ₁})(1-e^{-βθ₂}) / (1-e^{-β}))`,
/// the joint distribution function of the limiting measure, continuously
/// extended to `β = 0` and to the boundary of the square.
#[allow(non_snake_case)]
pub fn closed_form_R(theta1: f64, theta2: f64, beta: f64) -> f64 {
    let (a, b) = (theta1.clamp(0.0, 1.0), theta2.clamp(0.0, 1.0));
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if a == 1.0 {
        return b;
    }
    if b == 1.0 {
        return a;
    }
    if beta == 0.0 {
        return a * b;
    }
    if beta.abs() < SERIES_BELOW {
        return a * b + 0.5 * beta * a * b * (1.0 - a) * (1.0 - b);
    }
    let (ea, eb, ec) = (one_minus_exp(beta * a), one_minus_exp(beta * b), one_minus_exp(beta));
    let x = -ea * eb / ec;
    let r = if (beta > 0.0 && x > -0.5) || (-LN1P_BETA_MAX..0.0).contains(&beta) {
        -x.ln_1p() / beta
    } else {
        -(ln_abs_denominator(a, b, beta) - ln_abs_one_minus_exp(beta, 1.0)) / beta
    };
    r.clamp((a + b - 1.0).max(0.0), a.min(b))
}

/// `ρ_β(x,y) = β(1-e^{-β}) e^{-βx} e^{-βy} / D(x,y)^2`, the density of the
/// limiting measure; `1` at `β = 0`.
pub fn density_rho(x: f64, y: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        return 1.0;
    }
    let ln = beta.abs().ln() + ln_abs_one_minus_exp(beta, 1.0) - beta * (x + y) - 2.0 * ln_abs_denominator(x, y, beta);
    ln.exp()
}

/// `∂R_β/∂θ₂ = e^{-βθ₂}(1-e^{-βθ₁}) / D(θ₁, θ₂)`; `θ₁` at `β = 0`.
pub fn mixed_partial_r(theta1: f64, theta2: f64, beta: f64) -> f64 {
    if theta1 <= 0.0 {
        return 0.0;
    }
    if beta == 0.0 {
        return theta1;
    }
    (-beta * theta2 + ln_abs_one_minus_exp(beta, theta1) - ln_abs_denominator(theta1, theta2, beta)).exp()
}

/// The limiting measure `ρ_β(x,y) dx dy` at inverse temperature `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitMeasure {
    beta: f64,
}

impl LimitMeasure {
    pub fn new(beta: f64) -> Self {
        Self { beta }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn density(&self, x: f64, y: f64) -> f64 {
        density_rho(x, y, self.beta)
    }
}

impl JointCdf for LimitMeasure {
    fn joint_cdf(&self, x: f64, y: f64) -> f64 {
        closed_form_R(x, y, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The formula written out directly, usable where it is well conditioned.
    fn r_direct(a: f64, b: f64, beta: f64) -> f64 {
        let e = |x: f64| 1.0 - (-beta * x).exp();
        -(1.0 - e(a) * e(b) / e(1.0)).ln() / beta
    }

    #[test]
    fn matches_direct_formula() {
        for &beta in &[-5.0, -1.0, 0.5, 2.0, 8.0] {
            for &(a, b) in &[(0.1, 0.2), (0.5, 0.5), (0.9, 0.7), (0.3, 0.95)] {
                assert!((closed_form_R(a, b, beta) - r_direct(a, b, beta)).abs() < 1e-13);
            }
        }
        assert!((closed_form_R(0.5, 0.5, 2.0) - 0.310_057_253_479_138_76).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        // series against the ln1p branch just above the threshold
        for &beta in &[1.0001e-6, -1.0001e-6, 9.999e-7, -9.999e-7] {
            for &(a, b) in &[(0.2, 0.3), (0.5, 0.5), (0.8, 0.9)] {
                let e = |x: f64| one_minus_exp(beta * x);
                let ln1p = -(-e(a) * e(b) / e(1.0)).ln_1p() / beta;
                assert!((closed_form_R(a, b, beta) - ln1p).abs() < 2e-15);
            }
        }
        // log path against ln1p near x = -1/2 and near |β| = 50
        for &(a, b, beta) in &[(0.6, 0.7, 3.0), (0.75, 0.75, 2.2), (0.4, 0.5, -49.9), (0.4, 0.5, -50.1)] {
            let lp = -(ln_abs_denominator(a, b, beta) - ln_abs_one_minus_exp(beta, 1.0)) / beta;
            let e = |x: f64| one_minus_exp(beta * x);
            let ln1p = -(-e(a) * e(b) / e(1.0)).ln_1p() / beta;
            assert!((lp - ln1p).abs() < 1e-13, "{a} {b} {beta}: {lp} vs {ln1p}");
        }
    }

    #[test]
    fn limits_and_marginals() {
        for &beta in &[-30.0, -2.0, 0.0, 1e-9, 4.0, 300.0] {
            for &th in &[0.0, 0.13, 0.5, 0.77, 1.0] {
                assert_eq!(closed_form_R(th, 1.0, beta), th);
                assert_eq!(closed_form_R(1.0, th, beta), th);
                assert_eq!(closed_form_R(th, 0.0, beta), 0.0);
            }
        }
        for &(a, b) in &[(0.3, 0.6), (0.7, 0.8), (0.5, 0.5)] {
            assert!((closed_form_R(a, b, 1e3) - a.min(b)).abs() < 2e-2);
            assert!((closed_form_R(a, b, -1e3) - (a + b - 1.0).max(0.0)).abs() < 2e-2);
            assert!((closed_form_R(a, b, 1e-12) - a * b).abs() < 1e-12);
        }
    }

    #[test]
    fn extreme_beta_stays_finite() {
        for &beta in &[-1e4, -700.0, 700.0, 1e4] {
            for &(a, b) in &[(0.3, 0.6), (0.999, 0.999), (0.001, 0.5)] {
                let r = closed_form_R(a, b, beta);
                assert!(r.is_finite() && r >= 0.0 && r <= a.min(b));
                assert!(density_rho(a, b, beta).is_finite());
            }
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_rho(0.3, 0.8, 0.0), 1.0);
        let expect = 2.0 / (1.0 - (-2.0f64).exp());
        assert!((density_rho(0.0, 0.0, 2.0) - expect).abs() < 1e-14);
        assert!((density_rho(0.0, 0.0, 2.0) - 2.313_035_285_499_331).abs() < 1e-12);
        for &beta in &[-3.0, 2.0, 9.0] {
            assert_eq!(density_rho(0.2, 0.7, beta), density_rho(0.7, 0.2, beta));
        }
    }

    #[test]
    fn mixed_partial_examples() {
        assert_eq!(mixed_partial_r(0.0, 0.4, 3.0), 0.0);
        assert_eq!(mixed_partial_r(0.35, 0.4, 0.0), 0.35);
        assert!((mixed_partial_r(0.35, 0.4, 1e-10) - 0.35).abs() < 1e-9);
        for &beta in &[-4.0, 1.5, 6.0] {
            for &(a, b) in &[(0.2, 0.3), (0.6, 0.5), (0.9, 0.1)] {
                let h = 1e-6;
                let fd = (closed_form_R(a, b + h, beta) - closed_form_R(a, b - h, beta)) / (2.0 * h);
                assert!((mixed_partial_r(a, b, beta) - fd).abs() < 1e-6);
            }
        }
    }
}
