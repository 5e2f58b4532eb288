//! Closed-form log-domain bounds on `Pr[S_n / √n > c n^γ]`.
//!
//! Inside the window a single end state `(A_n, B_n) = (a_n, b_n)` whose last
//! boundary term alone exceeds the threshold gives a lower bound. Below the
//! window both boundary terms are controlled by the interval tail, which
//! gives an upper bound on their contribution.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::isqrt_u128;
use crate::process_paths::s_double_prime_count_wide;
use crate::renewal_measure::Params;

use super::{rate_transform, RateQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Case1Upper,
    Case2Lower,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Case1Upper => "case1_upper",
            CertificateKind::Case2Lower => "case2_lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCertificate {
    pub kind: CertificateKind,
    pub query: RateQuery,
    pub c_n: Option<u128>,
    pub a_n: Option<u128>,
    pub b_n: Option<u128>,
    /// Nonzero terms of `S''_n` in the certified end state.
    pub count: Option<u128>,
    pub log_prob: f64,
    /// `log_prob / n^{2γ}`.
    pub rate: f64,
}

/// Exponents `(lo, hi)` with `n^lo ≪ c_n ≪ n^hi`.
fn bracket_exponents(params: &Params, gamma: f64) -> (f64, f64) {
    let lo = (gamma + 0.5) / (0.5 - params.beta());
    let hi = if gamma <= params.alpha() { 2.0 * gamma / params.alpha() } else { 2.0 };
    (lo, hi)
}

struct Construction {
    c_n: u128,
    a_n: u128,
    b_n: u128,
    count: u128,
}

/// The end state for horizon `n`, or `None` when it fails a validity check.
fn construct(params: &Params, n: u64, gamma: f64, c: f64) -> Option<Construction> {
    let (lo, hi) = bracket_exponents(params, gamma);
    let ln_c = 0.5 * (lo + hi) * (n as f64).ln();
    // keeps c_n and a_n² inside u128
    if !(ln_c < 87.0) {
        return None;
    }
    let c_n = ln_c.exp().round() as u128;
    let root = isqrt_u128(c_n);
    let ceil_root = if root * root < c_n { root + 1 } else { root };
    let a_n = ceil_root + 1;
    if c_n <= a_n {
        return None;
    }
    let b_n = c_n - a_n;
    let n_wide = n as u128;
    // √(a_n + b_n) < a_n < n
    if !(a_n * a_n > c_n && a_n < n_wide) {
        return None;
    }
    let count = s_double_prime_count_wide(a_n, b_n, n_wide);
    let magnitude = count as f64 * (c_n as f64).powf(-params.beta());
    let threshold = c * (n as f64).powf(gamma + 0.5);
    if !(magnitude > threshold) {
        return None;
    }
    Some(Construction { c_n, a_n, b_n, count })
}

/// Smallest horizon at which the construction is valid, found by doubling
/// and then bisecting between the last invalid and first valid power of two.
fn min_usable_n(params: &Params, gamma: f64, c: f64) -> u64 {
    let valid = |n: u64| construct(params, n, gamma, c).is_some();
    let mut hi = 2u64;
    while !valid(hi) {
        if hi >= 1 << 62 {
            return u64::MAX;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if valid(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Lower bound `¼ Pr[A_n = a_n, B_n = b_n] = ¼ μ_{c_n}` for `γ` inside the window.
///
/// `c_n` is the integer nearest the log-space midpoint of the bracket
/// `(n^{(γ+1/2)/(1/2-β)}, n^{2γ/α})`, with upper exponent 2 once `γ ≥ α`;
/// `a_n = ⌈√c_n⌉ + 1` and `b_n = c_n - a_n`.
pub fn case2_certificate(params: &Params, query: &RateQuery) -> Result<RateCertificate> {
    let window = params.window();
    if !window.contains(query.gamma) {
        return Err(Error::Domain(format!(
            "case 2 requires gamma inside ({}, {}), got {}",
            window.u, window.v, query.gamma
        )));
    }
    let Some(k) = construct(params, query.n, query.gamma, query.c) else {
        return Err(Error::BracketEmpty { n: query.n, min_usable_n: min_usable_n(params, query.gamma, query.c) });
    };
    let log_prob = 0.25f64.ln() + params.ln_mu_real((k.c_n - 1) as f64);
    Ok(RateCertificate {
        kind: CertificateKind::Case2Lower,
        query: *query,
        c_n: Some(k.c_n),
        a_n: Some(k.a_n),
        b_n: Some(k.b_n),
        count: Some(k.count),
        log_prob,
        rate: rate_transform(log_prob, query.n, query.gamma),
    })
}

/// Upper bound `2 Pr[A + B > ⌊x^{1/(1/2-β)}⌋]`, `x = c n^{γ+1/2} / 2`, on the
/// probability that the boundary terms reach half the threshold, for `γ`
/// below the window.
pub fn case1_upper(params: &Params, query: &RateQuery) -> Result<RateCertificate> {
    let u = params.window().u;
    if !(query.gamma > 0.0 && query.gamma < u) {
        return Err(Error::Domain(format!("case 1 requires gamma in (0, {u}), got {}", query.gamma)));
    }
    let x = 0.5 * query.c * (query.n as f64).powf(query.gamma + 0.5);
    let k = x.powf(1.0 / (0.5 - params.beta())).floor();
    let log_tail = if k < 1.0 { -1.0 } else { -k.powf(params.alpha()) };
    let log_prob = LN_2 + log_tail;
    Ok(RateCertificate {
        kind: CertificateKind::Case1Upper,
        query: *query,
        c_n: None,
        a_n: None,
        b_n: None,
        count: None,
        log_prob,
        rate: rate_transform(log_prob, query.n, query.gamma),
    })
}
