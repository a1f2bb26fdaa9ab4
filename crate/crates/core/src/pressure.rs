//! The pressure `p(β) = ∫_0^1 ln((1 - e^{-βx}) / (βx)) dx`, its finite-volume
//! counterpart, and the q-Stirling remainder.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qcomb::ln_reduced_q_factorial_at;
use crate::quadrature::GaussLegendre;
use crate::special::ln_one_minus_exp_over;

/// Default node count of the Gauss–Legendre rule.
pub const DEFAULT_ORDER: usize = 64;

/// Beyond this `|β|` the unit interval is split at `SPLIT_SCALE / |β|`,
/// where the integrand bends from its quadratic onset to its linear tail.
const SPLIT_SCALE: f64 = 5.0;

/// Evaluates `p(β)` with a fixed composite Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct PressureEvaluator {
    rule: GaussLegendre,
}

impl Default for PressureEvaluator {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER)
    }
}

impl PressureEvaluator {
    pub fn new(order: usize) -> Self {
        Self {
            rule: GaussLegendre::new(order),
        }
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn pressure(&self, beta: f64) -> f64 {
        if beta == 0.0 {
            return 0.0;
        }
        let integrand = |x: f64| ln_one_minus_exp_over(beta * x);
        let split = SPLIT_SCALE / beta.abs();
        if split >= 1.0 {
            self.rule.integrate(0.0, 1.0, integrand)
        } else {
            self.rule.integrate(0.0, split, integrand) + self.rule.integrate(split, 1.0, integrand)
        }
    }

    /// `t · p(β t)`, extended by `0` at `t = 0`.
    pub fn t_pressure(&self, t: f64, beta: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else {
            t * self.pressure(beta * t)
        }
    }
}

fn default_evaluator() -> &'static PressureEvaluator {
    static EVAL: OnceLock<PressureEvaluator> = OnceLock::new();
    EVAL.get_or_init(PressureEvaluator::default)
}

/// `p(β)` with the default 64-node rule.
pub fn pressure(beta: f64) -> f64 {
    default_evaluator().pressure(beta)
}

/// `t · p(β t)`.
pub fn t_pressure(t: f64, beta: f64) -> f64 {
    default_evaluator().t_pressure(t, beta)
}

/// `p_n(β) = (1/n) ln([n]_q! / n!)` at `q = exp(-β/(n-1))`.
pub fn finite_volume_pressure(n: usize, beta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let ln_q = -beta / (n - 1) as f64;
    Ok(ln_reduced_q_factorial_at(n, ln_q) / n as f64)
}

fn stirling_constant_terms(beta: f64) -> f64 {
    0.5 * beta + 0.5 * ln_one_minus_exp_over(beta)
}

/// Remainder of the q-Stirling expansion
/// `ln({n}!) = n p(β) + β/2 + ½ ln((1 - e^{-β})/β) + R_n(β)`.
///
/// The expansion holds with the q-factorial taken at `q = exp(-β/n)`; that
/// is the scaling used here, and `R_n(β) = O(1/n)`.
pub fn q_stirling_remainder(n: usize, beta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let ln_q = -beta / n as f64;
    Ok(ln_reduced_q_factorial_at(n, ln_q) - n as f64 * pressure(beta) - stirling_constant_terms(beta))
}

/// The same difference evaluated at the Mallows scaling `q = exp(-β/(n-1))`.
///
/// This does not vanish: it converges to `β p'(β)`, the first-order effect of
/// rescaling `β` by `n/(n-1)`.
pub fn q_stirling_offset_at_mallows_scaling(n: usize, beta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let ln_q = -beta / (n - 1) as f64;
    Ok(ln_reduced_q_factorial_at(n, ln_q) - n as f64 * pressure(beta) - stirling_constant_terms(beta))
}
