//! Exact enumerations over the stationary law: the tail of the last
//! boundary term, autocovariances and the finite-horizon variance of `S̃_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ln_add_exp, CompensatedSum};
use crate::process_paths::interval_count;
use crate::renewal_measure::{mu_series, Envelope, Params, SeriesValue};

/// Neglected stationary mass may be at most this share of the enumerated tail.
pub const DEFAULT_TAIL_SHARE: f64 = 1e-9;

const FIRST_ENUMERATION: u64 = 1 << 10;
const MAX_ENUMERATION: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTail {
    /// `ln Pr[|S''_n| > x]` summed over the enumerated intervals.
    pub log_abs: f64,
    /// `ln Pr[S''_n > x] = log_abs - ln 2`.
    pub log_signed: f64,
    /// Largest interval length enumerated.
    pub truncation: u64,
    /// Upper bound on the omitted probability `Pr[A_n + B_n > truncation]`,
    /// zero when the enumeration covers the whole support.
    pub neglected: f64,
}

/// Number of ages `a ∈ [1, τ-1]` for which the last boundary term of a
/// horizon-`n` path ending in an excursion of length `τ` at age `a` has
/// at least `k` nonzero terms.
///
/// The visible count is `min(a, ⌊√τ⌋) - max(1, a-n+1) + 1`, which is at
/// least `k` exactly on `a ∈ [k, ⌊√τ⌋ + n - k]` whenever `k ≤ min(⌊√τ⌋, n)`.
pub fn ages_with_count_at_least(tau: u64, n: u64, k: u64) -> u64 {
    let r = interval_count(tau);
    if k == 0 {
        return tau.saturating_sub(1);
    }
    if k > r.min(n) {
        return 0;
    }
    let hi = (tau - 1).min(r + n - k);
    (hi + 1).saturating_sub(k)
}

/// Smallest integer `k ≥ 1` with `k · τ^{-β} > x`.
fn min_count_above(x: f64, tau: u64, beta: f64) -> u64 {
    let scale = (tau as f64).powf(-beta);
    let guess = (x / scale).floor();
    if guess >= u64::MAX as f64 / 2.0 {
        return u64::MAX / 2;
    }
    let mut k = (guess as u64 + 1).max(1);
    while k > 1 && (k - 1) as f64 * scale > x {
        k -= 1;
    }
    while k as f64 * scale <= x {
        k += 1;
    }
    k
}

fn unreachable(n: u64, x: f64, share: f64) -> Error {
    Error::UnreachablePrecision(format!(
        "boundary tail at n = {n}, x = {x}: the omitted mass cannot be certified below {share:e} of the result"
    ))
}

/// Exact `Pr[|S''_n| > x]` by enumerating the end state `(A_n, B_n)`.
///
/// Interval lengths are enumerated up to a truncation `N`, doubled until the
/// neglected mass `exp(-N^α)` is at most `share` times the enumerated tail
/// or the whole support (`n τ^{-β} > x`) is covered.
pub fn boundary_tail_exact(params: &Params, n: u64, x: f64, share: f64) -> Result<BoundaryTail> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("threshold must be positive, got {x}")));
    }
    if n == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    let beta = params.beta();
    let cap = (n as f64).powf(1.0 - 2.0 * beta);
    if x >= cap {
        return Ok(BoundaryTail {
            log_abs: f64::NEG_INFINITY,
            log_signed: f64::NEG_INFINITY,
            truncation: 0,
            neglected: 0.0,
        });
    }
    // n τ^{-β} > x is necessary for any contribution
    let support = if beta > 0.0 { (n as f64 / x).powf(1.0 / beta) } else { f64::INFINITY };

    // count(τ) τ^{-β} ≤ τ^{1/2-β}, so nothing below `first` contributes
    let first = x.powf(1.0 / (0.5 - beta)).floor().max(2.0);
    if first >= support {
        return Ok(BoundaryTail {
            log_abs: f64::NEG_INFINITY,
            log_signed: f64::NEG_INFINITY,
            truncation: 0,
            neglected: 0.0,
        });
    }
    if first >= MAX_ENUMERATION as f64 {
        return Err(unreachable(n, x, share));
    }
    let first = first as u64;
    // the whole tail is at most T(first - 1); if the best remainder is
    // already too large against that, no truncation can succeed
    let log_upper = params.log_interval_tail(first - 1);
    if support > MAX_ENUMERATION as f64 && params.log_interval_tail(MAX_ENUMERATION) > share.ln() + log_upper {
        return Err(unreachable(n, x, share));
    }

    let mut log_total = f64::NEG_INFINITY;
    let mut tau = first;
    let mut truncation = FIRST_ENUMERATION.max(first.next_power_of_two());
    loop {
        while tau <= truncation {
            if tau as f64 >= support {
                let tail = BoundaryTail {
                    log_abs: log_total,
                    log_signed: log_total - std::f64::consts::LN_2,
                    truncation: tau,
                    neglected: 0.0,
                };
                return Ok(tail);
            }
            let k = min_count_above(x, tau, beta);
            let ages = ages_with_count_at_least(tau, n, k);
            if ages > 0 {
                let term = params.ln_mu_real((tau - 1) as f64) + (ages as f64).ln();
                log_total = ln_add_exp(log_total, term);
            }
            tau += 1;
        }
        let log_neglected = params.log_interval_tail(truncation);
        if log_neglected <= share.ln() + log_total {
            return Ok(BoundaryTail {
                log_abs: log_total,
                log_signed: log_total - std::f64::consts::LN_2,
                truncation,
                neglected: log_neglected.exp(),
            });
        }
        if truncation >= MAX_ENUMERATION {
            return Err(unreachable(n, x, share));
        }
        truncation *= 2;
    }
}

/// `r(k) = E[X_t X_{t+k}] = Σ_{τ≥2} μ_τ τ^{-2β} (count(τ) - k)⁺`.
///
/// Only pairs inside one excursion contribute; distinct excursions carry
/// independent fair signs.
pub fn autocovariance_exact(params: &Params, k: u64, tol: f64) -> Result<SeriesValue> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let two_beta = 2.0 * params.beta();
    let lag = k;
    mu_series(
        params,
        tol,
        move |tau| {
            let c = interval_count(tau).saturating_sub(lag);
            if c == 0 {
                0.0
            } else {
                c as f64 * (tau as f64).powf(-two_beta)
            }
        },
        move |n| {
            let nf = n as f64;
            Envelope {
                exponent: two_beta + 0.5,
                lo: (1.0 - (lag + 1) as f64 / nf.sqrt()).max(0.0),
                hi: (nf + 1.0) / nf,
            }
            .bracket(params, n)
        },
    )
}

/// `exp(-((k+1)² - 1)^α)`, which dominates `r(k)` for `k ≥ 1`: a nonzero
/// term needs `τ ≥ (k+1)²`, and `count(τ) τ^{-2β} ≤ τ - 1`.
pub fn autocovariance_dominance(params: &Params, k: u64) -> f64 {
    let m = (k as f64 + 1.0).powi(2) - 1.0;
    (-m.powf(params.alpha())).exp()
}

/// `E[S̃_n²] / n = Σ_{τ<n} μ_τ (n - τ) count(τ)² τ^{-2β} / n`.
///
/// Complete excursions of length `τ` inside `[1, n]` start at renewal times
/// `s ∈ [1, n-τ]`, each with probability `μ_0 p_τ = μ_τ`.
pub fn tilde_variance_exact(params: &Params, n: u64) -> f64 {
    let two_beta = 2.0 * params.beta();
    let acc: CompensatedSum = (2..n)
        .map(|tau| {
            let c = interval_count(tau) as f64;
            params.mu_linear(tau) * (n - tau) as f64 * c * c * (tau as f64).powf(-two_beta)
        })
        .collect();
    acc.value() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process_paths::s_double_prime_count;
    use approx::assert_relative_eq;

    fn params() -> Params {
        Params::new(0.3, 0.05).unwrap()
    }

    #[test]
    fn age_counting_matches_enumeration() {
        for tau in 2..120u64 {
            for n in [1u64, 2, 3, 5, 8, 13, 40, 200] {
                for k in 0..15u64 {
                    let brute = (1..tau).filter(|&a| s_double_prime_count(a, tau - a, n) >= k).count() as u64;
                    assert_eq!(ages_with_count_at_least(tau, n, k), brute, "tau={tau} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn boundary_tail_brute_force_small_support() {
        // beta large enough that the support is finite and small
        let p = Params::new(0.1, 0.19).unwrap();
        let n = 30;
        let x = 5.0;
        let got = boundary_tail_exact(&p, n, x, DEFAULT_TAIL_SHARE).unwrap();
        assert_eq!(got.neglected, 0.0);
        let support = ((n as f64 / x).powf(1.0 / 0.19)).ceil() as u64;
        let brute: f64 = (2..=support)
            .flat_map(|tau| (1..tau).map(move |a| (tau, a)))
            .filter(|&(tau, a)| s_double_prime_count(a, tau - a, n) as f64 * (tau as f64).powf(-0.19) > x)
            .map(|(tau, _)| p.log_mu(tau).unwrap().exp())
            .sum();
        assert_relative_eq!(got.log_abs.exp(), brute, max_relative = 1e-10);
        assert_relative_eq!(got.log_signed, got.log_abs - std::f64::consts::LN_2);
    }

    #[test]
    fn boundary_tail_case_four_is_zero() {
        let p = params();
        let n = 1_000;
        let x = (n as f64).powf(0.9);
        let t = boundary_tail_exact(&p, n, x, DEFAULT_TAIL_SHARE).unwrap();
        assert_eq!(t.log_abs, f64::NEG_INFINITY);
    }

    #[test]
    fn boundary_tail_single_term_lower_bound() {
        let p = params();
        // just below the magnitude of the (1, 1) state
        let x = 2f64.powf(-0.05) * (1.0 - 1e-9);
        let t = boundary_tail_exact(&p, 1_000, x, DEFAULT_TAIL_SHARE).unwrap();
        assert!(t.log_signed >= p.log_mu(2).unwrap() + 0.5f64.ln());
    }

    #[test]
    fn boundary_tail_rejects_bad_threshold() {
        assert!(boundary_tail_exact(&params(), 10, 0.0, 1e-9).is_err());
    }

    #[test]
    fn autocovariance_examples() {
        let p = params();
        let r0 = autocovariance_exact(&p, 0, 1e-12).unwrap();
        assert!(r0.value > 0.0);
        for k in 1..=100u64 {
            let r = autocovariance_exact(&p, k, 1e-13).unwrap();
            assert!(r.value >= -r.error_bound);
            assert!(r.value <= autocovariance_dominance(&p, k) + r.error_bound, "k = {k}");
        }
    }

    #[test]
    fn autocovariance_sums_to_sigma_squared() {
        let p = params();
        let sigma2 = p.stats(1e-12).unwrap().sigma.powi(2);
        let mut total = autocovariance_exact(&p, 0, 1e-13).unwrap().value;
        for k in 1..=200 {
            total += 2.0 * autocovariance_exact(&p, k, 1e-13).unwrap().value;
        }
        let beyond: f64 = (201..2_000).map(|k| 2.0 * autocovariance_dominance(&p, k)).sum();
        assert!((total - sigma2).abs() <= 1e-10 + beyond, "{total} vs {sigma2}");
    }

    #[test]
    fn tilde_variance_approaches_sigma_squared() {
        let p = params();
        let sigma2 = p.stats(1e-12).unwrap().sigma.powi(2);
        let v3 = tilde_variance_exact(&p, 1_000);
        let v5 = tilde_variance_exact(&p, 100_000);
        assert!(v3 < v5 && v5 < sigma2);
        assert!((sigma2 - v5) / sigma2 < 0.01);
    }
}
