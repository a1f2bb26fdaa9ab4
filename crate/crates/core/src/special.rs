//! Numerically stable elementary functions shared by the q-combinatorics,
//! the pressure integrand and the closed-form solution.

/// `ln(sinh(x) / x)`, even in `x`, exactly `0` at `x = 0`.
pub fn ln_sinhc(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1.0 {
        // sinh(x)/x - 1 = Σ_{k≥1} x^{2k} / (2k+1)!
        let x2 = ax * ax;
        let mut s = 0.0;
        let mut k = 10.0;
        while k >= 1.0 {
            s = x2 / ((2.0 * k) * (2.0 * k + 1.0)) * (1.0 + s);
            k -= 1.0;
        }
        s.ln_1p()
    } else {
        // ln sinh(x) = x + ln(1 - e^{-2x}) - ln 2
        ax + (-(-2.0 * ax).exp_m1()).ln() - std::f64::consts::LN_2 - ax.ln()
    }
}

/// `ln((1 - e^{-u}) / u)`, the pressure integrand, with value `0` at `u = 0`.
///
/// Satisfies `f(-u) = f(u) + u` exactly in exact arithmetic.
pub fn ln_one_minus_exp_over(u: f64) -> f64 {
    -0.5 * u + ln_sinhc(0.5 * u)
}

/// `ln|e^x - 1|`; `-inf` at `x = 0`.
pub fn ln_abs_expm1(x: f64) -> f64 {
    if x > 1.0 {
        x + (-(-x).exp_m1()).ln()
    } else {
        x.exp_m1().abs().ln()
    }
}

/// `ln(e^a + e^b)` without overflow; handles `-inf` arguments.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `x / tanh(x)`, even, equal to `1` at `x = 0`.
pub fn x_coth_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        1.0 + ax * ax / 3.0
    } else {
        ax / ax.tanh()
    }
}

/// `-x ln x` with the continuous extension `0` at `x = 0`.
pub fn neg_x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Pairwise summation in a fixed, input-order-determined tree.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// `ln(n!)` by direct summation of logs.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).collect::<KahanSum>().value()
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - (ln_factorial(k) + ln_factorial(n - k))
}
