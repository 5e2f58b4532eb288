//! Log-domain primitives and small numerical kernels shared by the oracles.

use std::f64::consts::LN_2;

/// `ln(1 - e^{-d})` for `d > 0`.
///
/// Switches between `ln(-expm1(-d))` and `ln_1p(-exp(-d))` at `d = ln 2`,
/// which keeps full relative precision on both sides.
pub fn ln_one_minus_exp(d: f64) -> f64 {
    if d <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if d < LN_2 {
        (-(-d).exp_m1()).ln()
    } else {
        (-(-d).exp()).ln_1p()
    }
}

/// Stable `ln(e^{-x} - e^{-y})` for `y > x`.
///
/// Returns `-inf` when `y <= x`.
pub fn ln_diff_exp(x: f64, y: f64) -> f64 {
    -x + ln_one_minus_exp(y - x)
}

/// Stable `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `(m + 1)^p - m^p` for `m >= 1`, without cancellation.
pub fn power_increment(m: f64, p: f64) -> f64 {
    m.powf(p) * (p * (1.0 / m).ln_1p()).exp_m1()
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

const LENTZ_TINY: f64 = 1e-300;
const LENTZ_EPS: f64 = 1e-16;
const LENTZ_MAX_ITER: usize = 100_000;

/// Natural log of the upper incomplete gamma function `Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt`.
///
/// Valid for any real `a` (including negative values) and `x > 0`, evaluated
/// with the Legendre continued fraction and the modified Lentz algorithm.
/// The fraction converges quickly once `x` exceeds roughly `max(1, a)`; the
/// callers here always have `x >= 1`.
pub fn ln_upper_gamma(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "ln_upper_gamma requires x > 0, got {x}");
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / LENTZ_TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=LENTZ_MAX_ITER {
        let i = i as f64;
        let an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < LENTZ_TINY {
            d = LENTZ_TINY;
        }
        c = b + an / c;
        if c.abs() < LENTZ_TINY {
            c = LENTZ_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < LENTZ_EPS {
            break;
        }
    }
    -x + a * x.ln() + h.ln()
}

/// Integer square root of a `u128`, i.e. `⌊√n⌋`.
#[inline]
pub fn isqrt_u128(n: u128) -> u128 {
    n.isqrt()
}
