//! Invariant measure of the age/residual-life chain, the renewal-interval
//! law, the normalizing constant σ and the `(α, β) ↔ (u, v)` maps.
//!
//! The measure is pinned down by the size-biased tail
//!
//! ```text
//! Σ_{k > n} (k - 1) μ_k = exp(-n^α),   n = 1, 2, ...
//! ```
//!
//! which gives `μ_0 = 1 - e^{-1}` and, for `n >= 2`,
//! `μ_n = (exp(-(n-1)^α) - exp(-n^α)) / (n - 1)`. Every point `(k, l)` with
//! `k + l = n` carries mass `μ_n`, and the interval law is `p_n = μ_n / μ_0`.
//!
//! Infinite series over intervals are evaluated as a head sum plus a
//! rigorous sandwich for the remainder. Writing `ν_τ = T(τ-1) - T(τ)` with
//! `T(k) = exp(-k^α)`, any tail `Σ_{τ>N} ν_τ τ^{-s}` lies between
//! `(N/(N+1))^s Γ(1 - s/α, N^α)` and `Γ(1 - s/α, N^α)`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ln_one_minus_exp, ln_upper_gamma, power_increment, CompensatedSum};

/// `μ_0 = 1 - e^{-1}`, the stationary probability of the origin.
pub const MU_ORIGIN: f64 = 1.0 - 1.0 / E;

/// Largest truncation the series evaluator will reach before giving up.
pub const MAX_SERIES_TERMS: u64 = 1 << 27;

const FIRST_TRUNCATION: u64 = 1 << 10;

/// Absolute accuracy used for `p_1`.
const P_ONE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    alpha: f64,
    beta: f64,
}

impl Params {
    /// Validates `α > 0`, `β ≥ 0`, `α + 2β < 1/2`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "alpha and beta must be finite (alpha = {alpha}, beta = {beta})"
            )));
        }
        if alpha <= 0.0 {
            return Err(Error::InvalidParams(format!("alpha > 0 violated (alpha = {alpha})")));
        }
        if beta < 0.0 {
            return Err(Error::InvalidParams(format!("beta >= 0 violated (beta = {beta})")));
        }
        if alpha + 2.0 * beta >= 0.5 {
            return Err(Error::InvalidParams(format!(
                "alpha + 2*beta < 1/2 violated (alpha + 2*beta = {})",
                alpha + 2.0 * beta
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `ln μ_n` for `n = 0` or `n ≥ 2`.
    pub fn log_mu(&self, n: u64) -> Result<f64> {
        match n {
            0 => Ok(MU_ORIGIN.ln()),
            1 => Err(Error::InvalidIndex(1)),
            _ => Ok(self.ln_mu_real((n - 1) as f64)),
        }
    }

    /// `ln μ_n` with `m = n - 1 ≥ 1` given as a float, so that indices far
    /// beyond `u64` (certificates at astronomically large horizons) work.
    pub(crate) fn ln_mu_real(&self, m: f64) -> f64 {
        debug_assert!(m >= 1.0);
        let head = m.powf(self.alpha);
        let gap = power_increment(m, self.alpha);
        -head + ln_one_minus_exp(gap) - m.ln()
    }

    /// `μ_n` for `n ≥ 2` in linear scale (underflows to 0 deep in the tail).
    #[inline]
    pub(crate) fn mu_linear(&self, n: u64) -> f64 {
        debug_assert!(n >= 2);
        let m = (n - 1) as f64;
        let head = m.powf(self.alpha);
        let gap = power_increment(m, self.alpha);
        (-head).exp() * -(-gap).exp_m1() / m
    }

    /// `ln p_n` for `n ≥ 1`.
    pub fn log_p(&self, n: u64) -> Result<f64> {
        match n {
            0 => Err(Error::InvalidIndex(0)),
            1 => Ok(self.p_one()?.value.ln()),
            _ => Ok(self.log_mu(n)? - MU_ORIGIN.ln()),
        }
    }

    /// `p_1 = 1 - Σ_{k≥2} p_k` with its absolute error bound.
    pub fn p_one(&self) -> Result<SeriesValue> {
        let s = self.sum_mu_excursions(P_ONE_TOL)?;
        Ok(SeriesValue {
            value: 1.0 - s.value / MU_ORIGIN,
            error_bound: s.error_bound / MU_ORIGIN,
            truncation: s.truncation,
        })
    }

    /// `Σ_{k≥2} μ_k`, which is also the stationary probability of `B_t = 1`.
    pub fn sum_mu_excursions(&self, tol: f64) -> Result<SeriesValue> {
        mu_series(self, tol, |_| 1.0, |n| power_tail(self, n, 1.0))
    }

    /// `ln Pr[A + B > k] = -k^α` for `k ≥ 1`; `k = 0` gives `ln(1 - μ_0) = -1`.
    pub fn log_interval_tail(&self, k: u64) -> f64 {
        if k == 0 {
            -1.0
        } else {
            -(k as f64).powf(self.alpha)
        }
    }

    /// `E τ = 1/μ_0 = e/(e - 1)`, the same for every `α`.
    pub fn mean_tau(&self) -> f64 {
        1.0 / MU_ORIGIN
    }

    /// `E X² = Σ_{τ≥2} p_τ (count(τ) τ^{-β})²` for the per-excursion reward.
    pub fn second_moment_jump(&self, tol: f64) -> Result<SeriesValue> {
        if tol <= 0.0 || !tol.is_finite() {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        let inner = self.long_run_variance(tol * MU_ORIGIN)?;
        Ok(SeriesValue {
            value: inner.value / MU_ORIGIN,
            error_bound: inner.error_bound / MU_ORIGIN,
            truncation: inner.truncation,
        })
    }

    /// `Σ_{τ≥2} μ_τ count(τ)² τ^{-2β}`, which is `E X² / E τ = σ²`.
    fn long_run_variance(&self, tol: f64) -> Result<SeriesValue> {
        let two_beta = 2.0 * self.beta;
        mu_series(
            self,
            tol,
            |tau| {
                let c = crate::process_paths::interval_count(tau) as f64;
                c * c * (tau as f64).powf(-two_beta)
            },
            |n| squared_count_tail(self, n),
        )
    }

    pub fn stats(&self, tol: f64) -> Result<ProcessStats> {
        let second = self.second_moment_jump(tol)?;
        let mean_tau = self.mean_tau();
        Ok(ProcessStats {
            mean_tau,
            second_moment_jump: second.value,
            sigma: (second.value / mean_tau).sqrt(),
        })
    }

    pub fn window(&self) -> ScaleWindow {
        let u = self.alpha / (2.0 * (1.0 - self.alpha - 2.0 * self.beta));
        let v = 0.5 - 2.0 * self.beta;
        debug_assert!(0.0 < u && u < self.alpha && self.alpha < v && v <= 0.5);
        ScaleWindow { u, v }
    }

    /// Inverse of [`Params::window`].
    pub fn from_window(window: ScaleWindow) -> Result<Self> {
        let ScaleWindow { u, v } = window;
        let beta = 0.25 * (1.0 - 2.0 * v);
        let alpha = (1.0 + 2.0 * v) / (1.0 + 2.0 * u) * u;
        Params::new(alpha, beta.max(0.0))
    }
}

/// The scale window `(u, v)` on which the normal moderate-deviation rate fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleWindow {
    pub u: f64,
    pub v: f64,
}

impl ScaleWindow {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u > 0.0 && u < v && v <= 0.5) {
            return Err(Error::Domain(format!("window requires 0 < u < v <= 0.5, got ({u}, {v})")));
        }
        Ok(Self { u, v })
    }

    pub fn contains(&self, gamma: f64) -> bool {
        self.u < gamma && gamma < self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessStats {
    pub mean_tau: f64,
    pub second_moment_jump: f64,
    pub sigma: f64,
}

/// Value of a truncated series with a rigorous bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub error_bound: f64,
    pub truncation: u64,
}

/// Bounds `lo·τ^{-s} ≤ w(τ)/(τ-1) ≤ hi·τ^{-s}`, valid for all `τ > N`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Envelope {
    pub exponent: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Envelope {
    /// Bracket on `Σ_{τ>N} μ_τ w(τ)` for a weight described by `self` at `N`.
    ///
    /// With `ν_τ = T(τ-1) - T(τ)` and `s ≥ 0`,
    /// `(N/(N+1))^s Γ(1-s/α, N^α) ≤ Σ_{τ>N} ν_τ τ^{-s} ≤ Γ(1-s/α, N^α)`.
    pub(crate) fn bracket(&self, params: &Params, n: u64) -> (f64, f64) {
        let nf = n as f64;
        let upper = ln_upper_gamma(1.0 - self.exponent / params.alpha, nf.powf(params.alpha)).exp();
        let lower = (nf / (nf + 1.0)).powf(self.exponent) * upper;
        (self.lo.max(0.0) * lower, self.hi * upper)
    }
}

/// Bracket on `Σ_{τ>N} μ_τ τ^{1-s}` for `s ≥ 0`.
fn power_tail(params: &Params, n: u64, s: f64) -> (f64, f64) {
    Envelope { exponent: s, lo: 1.0, hi: (n + 1) as f64 / n as f64 }.bracket(params, n)
}

/// Bracket on `Σ_{τ>N} μ_τ ⌊√τ⌋² τ^{-2β}`.
///
/// Terms up to the next square `R² - 1` are summed. Beyond, with
/// `h(τ) = μ_τ τ^{-2β}` decreasing and `d = τ - r²` the sawtooth on block
/// `r² ≤ τ < (r+1)²`, the tail is `Σ h τ - Σ h d`. Within a block `d` has
/// mean `r`, so `Σ h d` lies in `[G - M - H, G]` with `G = Σ h √τ`,
/// `H = Σ h` and `M = h(R²) R(R+1)/2 + H`.
fn squared_count_tail(params: &Params, n: u64) -> (f64, f64) {
    let two_beta = 2.0 * params.beta;
    let r = n.isqrt() + 1;
    let first = r * r;
    let h = |tau: u64| params.mu_linear(tau) * (tau as f64).powf(-two_beta);
    let explicit: CompensatedSum = (n + 1..first)
        .map(|tau| {
            let c = crate::process_paths::interval_count(tau) as f64;
            h(tau) * c * c
        })
        .collect();
    let m = first - 1;
    let a = power_tail(params, m, two_beta);
    let g = power_tail(params, m, two_beta + 0.5);
    let hh = power_tail(params, m, two_beta + 1.0);
    let block = h(first) * (r * (r + 1)) as f64 / 2.0;
    let lo = (a.0 - g.1).max(0.0);
    let hi = a.1 - g.0 + block + 2.0 * hh.1;
    (explicit.value() + lo, explicit.value() + hi)
}

/// `Σ_{τ≥2} μ_τ w(τ)` to absolute accuracy `tol`.
///
/// `tail(N)` must bracket `Σ_{τ>N} μ_τ w(τ)`; the midpoint is returned. The
/// truncation doubles until the bracket is narrow enough.
pub(crate) fn mu_series(
    params: &Params,
    tol: f64,
    weight: impl Fn(u64) -> f64,
    tail: impl Fn(u64) -> (f64, f64),
) -> Result<SeriesValue> {
    let alpha = params.alpha;
    let mut head = CompensatedSum::new();
    let mut abs_head = 0.0;
    let mut next_tau = 2u64;
    let mut truncation = FIRST_TRUNCATION;
    loop {
        while next_tau <= truncation {
            let term = params.mu_linear(next_tau) * weight(next_tau);
            head.add(term);
            abs_head += term.abs();
            next_tau += 1;
        }
        let (tail_lo, tail_hi) = tail(truncation);
        let rounding = 4.0 * f64::EPSILON * abs_head;
        let error_bound = 0.5 * (tail_hi - tail_lo) + rounding;
        if error_bound < tol {
            return Ok(SeriesValue {
                value: head.value() + 0.5 * (tail_lo + tail_hi),
                error_bound,
                truncation,
            });
        }
        if truncation >= MAX_SERIES_TERMS {
            return Err(Error::UnreachablePrecision(format!(
                "series for alpha = {alpha} needs more than {MAX_SERIES_TERMS} terms to reach {tol:e} (bracket {error_bound:e})"
            )));
        }
        truncation *= 2;
    }
}

/// Tabulated `ln μ_n` for `n ∈ {0} ∪ {2, …, N}` together with the exact
/// size-biased remainder `Σ_{k>N} (k-1) μ_k = exp(-N^α)`.
#[derive(Debug, Clone)]
pub struct MeasureTable {
    params: Params,
    log_mu: Vec<f64>,
    truncation_n: u64,
    /// `ln Σ_{k>N} (k-1) μ_k = -N^α`.
    tail_bound: f64,
}

impl MeasureTable {
    pub fn new(params: Params, truncation_n: u64) -> Result<Self> {
        if truncation_n < 2 {
            return Err(Error::Domain(format!("truncation must be >= 2, got {truncation_n}")));
        }
        let mut log_mu = Vec::with_capacity(truncation_n as usize + 1);
        log_mu.push(MU_ORIGIN.ln());
        log_mu.push(f64::NAN);
        for n in 2..=truncation_n {
            log_mu.push(params.ln_mu_real((n - 1) as f64));
        }
        Ok(Self {
            params,
            log_mu,
            truncation_n,
            tail_bound: params.log_interval_tail(truncation_n),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn truncation_n(&self) -> u64 {
        self.truncation_n
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn log_mu(&self, n: u64) -> Result<f64> {
        if n == 1 || n > self.truncation_n {
            return Err(Error::InvalidIndex(n));
        }
        Ok(self.log_mu[n as usize])
    }

    pub fn mu(&self, n: u64) -> Result<f64> {
        self.log_mu(n).map(f64::exp)
    }

    /// Iterates `(n, μ_n)` over `n = 2..=N`.
    pub fn excursion_masses(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        (2..=self.truncation_n).map(move |n| (n, self.log_mu[n as usize].exp()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    const ALPHA_GRID: [f64; 3] = [0.1, 0.3, 0.45];

    #[test]
    fn validate_params_examples() {
        assert!(Params::new(0.3, 0.05).is_ok());
        let err = Params::new(0.3, 0.11).unwrap_err();
        assert!(err.to_string().contains("alpha + 2*beta < 1/2"));
        let err = Params::new(0.0, 0.1).unwrap_err();
        assert!(err.to_string().contains("alpha > 0"));
        assert!(Params::new(0.2, -0.01).unwrap_err().to_string().contains("beta >= 0"));
    }

    #[test]
    fn log_mu_origin_is_universal() {
        for &a in &ALPHA_GRID {
            let p = Params::new(a, 0.0).unwrap();
            assert_abs_diff_eq!(p.log_mu(0).unwrap().exp(), 0.632_120_558_828_557_7, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_mu_two_at_alpha_03() {
        let p = Params::new(0.3, 0.05).unwrap();
        // e^{-1} - e^{-2^0.3}, evaluated in extended precision: 0.0759193...
        let direct = (-1.0f64).exp() - (-(2f64.powf(0.3))).exp();
        assert_relative_eq!(p.log_mu(2).unwrap().exp(), direct, max_relative = 1e-13);
        assert_abs_diff_eq!(p.log_mu(2).unwrap().exp(), 0.07592, epsilon = 5e-6);
        assert_eq!(p.log_mu(1), Err(Error::InvalidIndex(1)));
    }

    #[test]
    fn log_p_matches_ratio_and_normalizes() {
        let p = Params::new(0.3, 0.05).unwrap();
        assert_relative_eq!(
            p.log_p(2).unwrap(),
            p.log_mu(2).unwrap() - p.log_mu(0).unwrap(),
            max_relative = 1e-15
        );
        // T(N)/N < 1e-13 at N = 2^17 for alpha = 0.3
        let n_max = 1u64 << 17;
        let total: CompensatedSum = (2..=n_max).map(|n| p.log_p(n).unwrap().exp()).collect();
        let p1 = p.log_p(1).unwrap().exp();
        let remainder = (-(n_max as f64).powf(0.3)).exp() / n_max as f64 / MU_ORIGIN;
        assert!((total.value() + p1 - 1.0).abs() <= remainder + 1e-13);
    }

    #[test]
    fn p_one_exceeds_point_four() {
        for &a in &ALPHA_GRID {
            for &b in &[0.0, 0.01] {
                let p = Params::new(a, b).unwrap();
                let p1 = p.p_one().unwrap();
                assert!(p1.value > 0.4, "alpha={a}: p1={}", p1.value);
                assert!(p1.error_bound < 1e-13);
            }
        }
    }

    #[test]
    fn p_one_agrees_with_plain_partial_sum_for_fast_tails() {
        // alpha = 0.45: plain truncation with the crude remainder is already tight.
        let p = Params::new(0.45, 0.0).unwrap();
        let n_max = 20_000u64;
        let s: CompensatedSum = (2..=n_max).map(|n| p.log_mu(n).unwrap().exp()).collect();
        let crude = 1.0 - s.value() / MU_ORIGIN;
        let bound = (-(n_max as f64).powf(0.45)).exp() / n_max as f64 / MU_ORIGIN;
        assert!((p.p_one().unwrap().value - crude).abs() <= bound + 1e-14);
    }

    #[test]
    fn interval_tail_examples() {
        let p = Params::new(0.45, 0.0).unwrap();
        let q = Params::new(0.3, 0.0).unwrap();
        assert_abs_diff_eq!(Params::new(0.45, 0.02).unwrap().log_interval_tail(4), -(4f64.powf(0.45)));
        assert_eq!(q.log_interval_tail(1), -1.0);
        // 1 - mu_0 = e^{-1}
        assert_abs_diff_eq!((1.0 - p.log_mu(0).unwrap().exp()).ln(), q.log_interval_tail(1), epsilon = 1e-14);
        for k in 1..200 {
            assert!(p.log_interval_tail(k + 1) < p.log_interval_tail(k));
        }
    }

    #[test]
    fn interval_tail_half_power() {
        // alpha = 0.5 is outside the valid family only through the third
        // constraint when beta > 0; the closed form itself is alpha-generic.
        let p = Params { alpha: 0.5, beta: 0.0 };
        assert_eq!(p.log_interval_tail(4), -2.0);
    }

    #[test]
    fn mean_tau_is_universal() {
        for &a in &ALPHA_GRID {
            let p = Params::new(a, 0.01).unwrap();
            assert_abs_diff_eq!(p.mean_tau(), E / (E - 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(p.mean_tau(), 1.581_976_706_869_326_4, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_moment_matches_brute_force_beta_zero() {
        let p = Params::new(0.3, 0.0).unwrap();
        // brute force to N = 10^5; the rest is below exp(-10^{1.5}) ~ 1e-14
        let brute: CompensatedSum = (2..=100_000u64)
            .map(|t| {
                let r = (t as f64).sqrt().floor();
                p.log_p(t).unwrap().exp() * r * r
            })
            .collect();
        let s = p.second_moment_jump(1e-12).unwrap();
        assert!(s.error_bound < 1e-12);
        assert_abs_diff_eq!(s.value, brute.value(), epsilon = 1e-11);
    }

    #[test]
    fn second_moment_heavy_tail_reaches_tolerance() {
        // alpha ~ 0.108 needs the incomplete-gamma remainder; compare against
        // a long head sum with the crude remainder bound.
        let p = Params::from_window(ScaleWindow::new(0.1, 0.15).unwrap()).unwrap();
        let s = p.second_moment_jump(1e-7).unwrap();
        let n_max = 1u64 << 21;
        let head: CompensatedSum = (2..=n_max)
            .map(|t| {
                let c = crate::process_paths::interval_count(t) as f64;
                p.mu_linear(t) * c * c * (t as f64).powf(-2.0 * p.beta()) / MU_ORIGIN
            })
            .collect();
        let crude_tail = (-(n_max as f64).powf(p.alpha())).exp() * 2.0 / MU_ORIGIN;
        assert!(s.value >= head.value() - 1e-7);
        assert!(s.value <= head.value() + crude_tail + 1e-7);
    }

    #[test]
    fn sigma_positive() {
        for &(a, b) in &[(0.3, 0.05), (0.1, 0.0), (0.45, 0.02), (0.2, 0.14)] {
            let st = Params::new(a, b).unwrap().stats(1e-10).unwrap();
            assert!(st.sigma > 0.0);
            assert_relative_eq!(st.sigma, (st.second_moment_jump / st.mean_tau).sqrt());
        }
    }

    #[test]
    fn window_examples() {
        let p = Params::new(0.3, 0.05).unwrap();
        let w = p.window();
        assert_abs_diff_eq!(w.u, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(w.v, 0.40, epsilon = 1e-15);
        assert_eq!(Params::new(0.2, 0.0).unwrap().window().v, 0.5);

        let back = Params::from_window(ScaleWindow::new(0.25, 0.40).unwrap()).unwrap();
        assert_abs_diff_eq!(back.alpha(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(back.beta(), 0.05, epsilon = 1e-15);
        assert_eq!(Params::from_window(ScaleWindow::new(0.2, 0.5).unwrap()).unwrap().beta(), 0.0);
        assert!(ScaleWindow::new(0.4, 0.25).is_err());
    }

    #[test]
    fn measure_identity_residual() {
        for &a in &ALPHA_GRID {
            let p = Params::new(a, 0.0).unwrap();
            for &n in &[1u64, 2, 7, 100, 1000] {
                let big_n = n + 10_000;
                let partial: CompensatedSum =
                    (n + 1..=big_n).map(|k| (k - 1) as f64 * p.log_mu(k).unwrap().exp()).collect();
                let lhs = partial.value() + p.log_interval_tail(big_n).exp();
                assert_abs_diff_eq!(lhs, p.log_interval_tail(n).exp(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn measure_table_indices() {
        let p = Params::new(0.3, 0.05).unwrap();
        let t = MeasureTable::new(p, 100).unwrap();
        assert_eq!(t.log_mu(1), Err(Error::InvalidIndex(1)));
        assert_eq!(t.log_mu(101), Err(Error::InvalidIndex(101)));
        assert_eq!(t.tail_bound(), -(100f64.powf(0.3)));
        assert!(t.excursion_masses().all(|(_, m)| m.is_finite() && m > 0.0));
    }

    proptest! {
        #[test]
        fn window_round_trip(u in 0.001f64..0.49, dv in 0.001f64..0.5) {
            let v = (u + dv).min(0.5);
            prop_assume!(u < v);
            let p = Params::from_window(ScaleWindow::new(u, v).unwrap()).unwrap();
            let w = p.window();
            prop_assert!((w.u - u).abs() < 1e-12);
            prop_assert!((w.v - v).abs() < 1e-12);
            prop_assert!(w.u < p.alpha() && p.alpha() < w.v);
        }

        #[test]
        fn invariance_mu0_p_equals_mu(a in 0.01f64..0.49, n in 2u64..1000) {
            let p = Params::new(a, 0.0).unwrap();
            let lhs = MU_ORIGIN * p.log_p(n).unwrap().exp();
            let rhs = p.log_mu(n).unwrap().exp();
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-14);
        }
    }
}
