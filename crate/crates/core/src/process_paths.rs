//! Signed paths `X_t = ±φ(A_t, B_t)` and the decomposition of their partial
//! sums into the two incomplete boundary excursions and the complete
//! excursions in between.
//!
//! All `≈` relations for excursion rewards are made exact by counting the
//! ages `k` of an excursion of length `τ` with `k² ≤ τ`:
//! `count(τ) = min(⌊√τ⌋, τ - 1)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain_sampler::{ChainSampler, ChainState, RngStream};
use crate::renewal_measure::Params;

/// `φ(k, l) = (k+l)^{-β}` if `k² ≤ k + l`, else 0.
pub fn phi(params: &Params, k: u64, l: u64) -> f64 {
    let n = k + l;
    if (k as u128) * (k as u128) <= n as u128 {
        (n as f64).powf(-params.beta())
    } else {
        0.0
    }
}

/// `φ` extended to the origin, where it vanishes.
pub fn phi_state(params: &Params, state: ChainState) -> f64 {
    match state {
        ChainState::Origin => 0.0,
        ChainState::Excursion { age, residual } => phi(params, age, residual),
    }
}

/// Number of ages `1 ≤ k ≤ τ-1` with `k² ≤ τ`.
#[inline]
pub fn interval_count(tau: u64) -> u64 {
    if tau < 2 {
        0
    } else {
        tau.isqrt().min(tau - 1)
    }
}

/// `count(τ) τ^{-β}`, the magnitude of the reward of a complete excursion.
pub fn excursion_reward_magnitude(params: &Params, tau: u64) -> f64 {
    match interval_count(tau) {
        0 => 0.0,
        c => c as f64 * (tau as f64).powf(-params.beta()),
    }
}

/// Nonzero `φ` terms of the first (incomplete) excursion given `(A_1, B_1) = (a, b)`.
///
/// Returns 0 when the excursion runs past `n`; that case belongs to `S''`.
pub fn s_prime_count(a: u64, b: u64, n: u64) -> u64 {
    if 1 + b > n {
        return 0;
    }
    let tau = a + b;
    (interval_count(tau) + 1).saturating_sub(a)
}

/// Nonzero `φ` terms among times `max(1, n-a+1)..=n` given `(A_n, B_n) = (a, b)`.
pub fn s_double_prime_count(a: u64, b: u64, n: u64) -> u64 {
    s_double_prime_count_wide(a as u128, b as u128, n as u128) as u64
}

pub(crate) fn s_double_prime_count_wide(a: u128, b: u128, n: u128) -> u128 {
    let lo = if a + 1 > n { a + 1 - n } else { 1 };
    let hi = a.min((a + b).isqrt());
    (hi + 1).saturating_sub(lo)
}

/// Sign of one excursion.
pub type Sign = i8;

#[derive(Debug, Clone, PartialEq)]
pub struct SignedPath {
    /// States at times `1..=n`.
    pub states: Vec<ChainState>,
    /// Excursion start time `t - A_t` (may be ≤ 0 for the excursion
    /// covering time 1) to its sign.
    pub signs: BTreeMap<i64, Sign>,
    /// `X_t` for `t = 1..=n`.
    pub x: Vec<f64>,
}

impl SignedPath {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.x.iter().sum()
    }
}

/// Draws a stationary chain path and attaches one fair sign per excursion.
///
/// Randomness is consumed as: the chain path first, then one sign per
/// excursion in order of appearance.
pub fn generate_path(sampler: &mut ChainSampler, n: usize, rng: &mut RngStream) -> SignedPath {
    let states = sampler.run_path(n, rng);
    let params = *sampler.params();
    let mut signs = BTreeMap::new();
    let mut x = Vec::with_capacity(n);
    let mut current: Sign = 0;
    for (i, &state) in states.iter().enumerate() {
        let t = i as i64 + 1;
        match state {
            ChainState::Origin => x.push(0.0),
            ChainState::Excursion { age, residual } => {
                if i == 0 || age == 1 {
                    current = rng.sign();
                    signs.insert(t - age as i64, current);
                }
                x.push(current as f64 * phi(&params, age, residual));
            }
        }
    }
    SignedPath { states, signs, x }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumDecomposition {
    pub s_prime: f64,
    pub s_tilde: f64,
    pub s_double_prime: f64,
    pub s_total: f64,
    /// Whether the chain visits the origin somewhere in `[1, n]`.
    pub interior_renewal: bool,
}

impl SumDecomposition {
    pub fn boundary(&self) -> f64 {
        self.s_prime + self.s_double_prime
    }
}

/// Splits `S_n` at the first renewal `1 + B_1` and the last renewal `n - A_n`.
///
/// Renewal times carry `X = 0`, so the three sums may share them. Without
/// any renewal in `[1, n]` everything is assigned to `S''`.
pub fn decompose(path: &SignedPath) -> SumDecomposition {
    let first = path.states.iter().position(ChainState::is_origin);
    let last = path.states.iter().rposition(ChainState::is_origin);
    let s_total: f64 = path.x.iter().sum();
    match (first, last) {
        (Some(r1), Some(r2)) => SumDecomposition {
            s_prime: path.x[..r1].iter().sum(),
            s_tilde: path.x[r1..=r2].iter().sum(),
            s_double_prime: path.x[r2 + 1..].iter().sum(),
            s_total,
            interior_renewal: true,
        },
        _ => SumDecomposition {
            s_prime: 0.0,
            s_tilde: 0.0,
            s_double_prime: s_total,
            s_total,
            interior_renewal: false,
        },
    }
}

/// End states and decomposition of a path, without the path itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub first: ChainState,
    pub last: ChainState,
    pub decomposition: SumDecomposition,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    tau: u64,
    /// Visible ages `age_lo..=age_hi` inside `[1, n]`.
    age_lo: u64,
    age_hi: u64,
}

/// Excursion-level simulator producing [`PathSummary`] values.
///
/// Consumes randomness exactly like [`generate_path`] followed by
/// [`decompose`], so both agree path by path on a shared stream, but it
/// jumps from renewal to renewal instead of materializing every state.
#[derive(Debug, Clone)]
pub struct PathSimulator {
    sampler: ChainSampler,
    segments: Vec<Segment>,
    neg_beta: f64,
}

impl PathSimulator {
    pub fn new(params: Params) -> Self {
        Self { sampler: ChainSampler::new(params), segments: Vec::new(), neg_beta: -params.beta() }
    }

    pub fn params(&self) -> &Params {
        self.sampler.params()
    }

    pub fn sampler_mut(&mut self) -> &mut ChainSampler {
        &mut self.sampler
    }

    fn segment_sum(&self, seg: &Segment, sign: Sign) -> f64 {
        let visible = (seg.age_hi.min(seg.tau.isqrt()) + 1).saturating_sub(seg.age_lo);
        if visible == 0 {
            0.0
        } else {
            sign as f64 * visible as f64 * (seg.tau as f64).powf(self.neg_beta)
        }
    }

    pub fn simulate(&mut self, n: u64, rng: &mut RngStream) -> PathSummary {
        assert!(n >= 1);
        self.segments.clear();
        let first = self.sampler.sample_stationary_state(rng);
        let mut first_renewal = None;
        let mut last_renewal = None;
        // time of the next origin visit
        let mut t = match first {
            ChainState::Origin => 1,
            ChainState::Excursion { age, residual } => {
                let tau = age + residual;
                self.segments.push(Segment { tau, age_lo: age, age_hi: (tau - 1).min(age + n - 1) });
                1 + residual
            }
        };
        while t <= n {
            first_renewal.get_or_insert(t);
            last_renewal = Some(t);
            if t == n {
                break;
            }
            let tau = self.sampler.sample_p_interval(rng);
            if tau > 1 {
                self.segments.push(Segment { tau, age_lo: 1, age_hi: (tau - 1).min(n - t) });
            }
            t += tau;
        }
        let last = match last_renewal {
            Some(r) if r == n => ChainState::Origin,
            Some(r) => {
                let seg = self.segments.last().expect("excursion after last renewal");
                let age = n - r;
                ChainState::Excursion { age, residual: seg.tau - age }
            }
            None => {
                let age = first.age() + n - 1;
                ChainState::Excursion { age, residual: first.interval() - age }
            }
        };

        let count = self.segments.len();
        let mut s_prime = 0.0;
        let mut s_tilde = 0.0;
        let mut s_double_prime = 0.0;
        let starts_inside = first.is_origin();
        for i in 0..count {
            let sign = rng.sign();
            let seg = self.segments[i];
            let value = self.segment_sum(&seg, sign);
            let is_first_partial = i == 0 && !starts_inside;
            let is_last_partial = i == count - 1 && !last.is_origin();
            if last_renewal.is_none() {
                s_double_prime += value;
            } else if is_first_partial {
                s_prime += value;
            } else if is_last_partial {
                s_double_prime += value;
            } else {
                s_tilde += value;
            }
        }
        let decomposition = SumDecomposition {
            s_prime,
            s_tilde,
            s_double_prime,
            s_total: s_prime + s_tilde + s_double_prime,
            interior_renewal: last_renewal.is_some(),
        };
        PathSummary { first, last, decomposition }
    }
}

/// `x^{-β} min(n, √x)`, the scalar bound behind the deterministic cap on
/// boundary terms; it never exceeds `n^{1-2β}`.
pub fn boundary_scalar(beta: f64, x: f64, n: f64) -> f64 {
    x.powf(-beta) * n.min(x.sqrt())
}

/// Deterministic cap on `|S'_n| + |S''_n|`.
///
/// Each boundary term is at most `ℓ^{1-2β}` where `ℓ` is its number of
/// visible time steps, the two visible stretches are disjoint inside
/// `[1, n]`, and `ℓ ↦ ℓ^{1-2β}` is concave; hence the sum is at most
/// `2 (n/2)^{1-2β} = 2^{2β} n^{1-2β}`.
pub fn boundary_sum_cap(params: &Params, n: u64) -> f64 {
    let p = 1.0 - 2.0 * params.beta();
    2f64.powf(2.0 * params.beta()) * (n as f64).powf(p)
}
