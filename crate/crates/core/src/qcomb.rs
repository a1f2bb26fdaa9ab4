//! Log-domain q-integer arithmetic, inversion statistics and the Mallows
//! probability mass function.

use std::fmt;
use std::ops::{Div, Mul};

use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::special::{ln_factorial, ln_sinhc, KahanSum};

/// A real number stored as a sign and the natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    sign: i8,
    logmag: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue { sign: 1, logmag: 0.0 };

    /// The positive number `exp(logmag)`.
    pub fn from_ln(logmag: f64) -> Self {
        if logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: 1, logmag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude.
    pub fn ln(&self) -> f64 {
        self.logmag
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.logmag.exp()
    }

    /// `self^k` for an integer exponent.
    pub fn powi(&self, k: u64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        Self {
            sign,
            logmag: self.logmag * k as f64,
        }
    }

    /// Sum of two values of the same sign (or zero).
    pub fn add_same_sign(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        assert_eq!(self.sign, other.sign, "add_same_sign on values of opposite sign");
        Self {
            sign: self.sign,
            logmag: crate::special::log_add_exp(self.logmag, other.logmag),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue {
            sign: self.sign * rhs.sign,
            logmag: self.logmag + rhs.logmag,
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(rhs.sign != 0, "division by zero LogValue");
        if self.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue {
            sign: self.sign * rhs.sign,
            logmag: self.logmag - rhs.logmag,
        }
    }
}

/// A bijection of `{0, .., n-1}` (displayed one-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// From zero-based images; rejects anything that is not a bijection.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::NotAPermutation(format!("{image:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    /// From one-based images, e.g. `[2, 4, 1, 3]`.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::NotAPermutation(format!("{image:?}")));
        }
        Self::new(image.iter().map(|&v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::new(image.clone()).is_ok());
        Self { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Zero-based images.
    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

/// Number of pairs `i < j` with `π_i > π_j`, by merge counting.
pub fn inv(pi: &Permutation) -> u64 {
    inversions_of(pi.as_slice())
}

/// Inversion count of an arbitrary sequence of distinct keys.
pub fn inversions_of<T: Copy + Ord>(xs: &[T]) -> u64 {
    let n = xs.len();
    if n < 2 {
        return 0;
    }
    let mut a: Vec<T> = xs.to_vec();
    let mut b: Vec<T> = xs.to_vec();
    let mut count = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if a[j] < a[i] {
                    b[k] = a[j];
                    count += (mid - i) as u64;
                    j += 1;
                } else {
                    b[k] = a[i];
                    i += 1;
                }
                k += 1;
            }
            b[k..k + (mid - i)].copy_from_slice(&a[i..mid]);
            k += mid - i;
            b[k..k + (hi - j)].copy_from_slice(&a[j..hi]);
            lo = hi;
        }
        std::mem::swap(&mut a, &mut b);
        width *= 2;
    }
    count
}

/// Inversion count via a Fenwick tree over ranks.
pub fn inv_fenwick(pi: &Permutation) -> u64 {
    let n = pi.len();
    let mut tree = Fenwick::new(n);
    let mut count = 0u64;
    for (seen, &v) in pi.as_slice().iter().enumerate() {
        // earlier entries greater than v
        count += seen as u64 - tree.prefix(v);
        tree.add(v, 1);
    }
    count
}

fn check_q(q: f64) -> Result<f64> {
    if q > 0.0 && q.is_finite() {
        Ok(q.ln())
    } else {
        Err(Error::InvalidQ(q))
    }
}

/// `ln([k]_q / k)` as a function of `a = ln q`.
///
/// Uses `[k]_q = e^{(k-1)a/2} sinh(ka/2) / sinh(a/2)`, which is exact at
/// `a = 0` and loses no precision as `q -> 1`.
fn ln_q_integer_ratio(k: usize, ln_q: f64) -> f64 {
    if ln_q == 0.0 || k <= 1 {
        return 0.0;
    }
    let k = k as f64;
    0.5 * (k - 1.0) * ln_q + ln_sinhc(0.5 * k * ln_q) - ln_sinhc(0.5 * ln_q)
}

/// `ln({n}!) = ln([n]_q! / n!)` given `ln q`.
pub fn ln_reduced_q_factorial_at(n: usize, ln_q: f64) -> f64 {
    if ln_q == 0.0 {
        return 0.0;
    }
    (2..=n)
        .map(|k| ln_q_integer_ratio(k, ln_q))
        .collect::<KahanSum>()
        .value()
}

/// `[n]_q!` in log domain.
pub fn log_q_factorial(n: usize, q: f64) -> Result<LogValue> {
    let a = check_q(q)?;
    Ok(LogValue::from_ln(ln_reduced_q_factorial_at(n, a) + ln_factorial(n)))
}

/// `{n}! = [n]_q! / n!` in log domain.
pub fn log_reduced_q_factorial(n: usize, q: f64) -> Result<LogValue> {
    let a = check_q(q)?;
    Ok(LogValue::from_ln(ln_reduced_q_factorial_at(n, a)))
}

/// The Gaussian binomial coefficient `[n choose k]_q` in log domain.
pub fn log_gaussian_binomial(n: usize, k: usize, q: f64) -> Result<LogValue> {
    let a = check_q(q)?;
    if k > n {
        return Err(Error::KExceedsN { n, k });
    }
    let full = |m: usize| ln_reduced_q_factorial_at(m, a) + ln_factorial(m);
    // summing the two lower factorials first makes k <-> n-k bit-symmetric
    Ok(LogValue::from_ln(full(n) - (full(k) + full(n - k))))
}

/// `P_{n,q}(π) = q^{inv(π)} / [n]_q!`.
pub fn mallows_pmf(pi: &Permutation, q: f64) -> Result<f64> {
    let a = check_q(q)?;
    let z = log_q_factorial(pi.len(), q)?;
    Ok((inv(pi) as f64 * a - z.ln()).exp())
}

/// Advances `xs` to the next permutation in lexicographic order; returns
/// `false` (leaving `xs` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = n - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Calls `f` on every permutation of `{0..n-1}` in lexicographic order.
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut xs: Vec<usize> = (0..n).collect();
    loop {
        f(&xs);
        if !next_permutation(&mut xs) {
            break;
        }
    }
}
