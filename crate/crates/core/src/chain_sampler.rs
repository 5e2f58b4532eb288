//! Exact stationary sampling and stepping of the age/residual-life chain.

use std::f64::consts::E;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::renewal_measure::{MeasureTable, Params, MU_ORIGIN};

/// Interval lengths are capped here; the stationary probability of a longer
/// interval is `exp(-(2^62)^α)`.
pub const MAX_INTERVAL: u64 = 1 << 62;

const FIRST_TABLE_LEN: u64 = 256;
/// Hard limit on the p-law table. Past it, an undecided draw is resolved to
/// `τ = 1`; this happens with probability below `T(N)/(N μ_0)` at this `N`.
const MAX_TABLE_LEN: u64 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainState {
    Origin,
    /// Age `k ≥ 1` since the last renewal and residual life `l ≥ 1`.
    Excursion { age: u64, residual: u64 },
}

impl ChainState {
    pub fn excursion(age: u64, residual: u64) -> Option<Self> {
        (age >= 1 && residual >= 1).then_some(ChainState::Excursion { age, residual })
    }

    pub fn is_origin(&self) -> bool {
        matches!(self, ChainState::Origin)
    }

    /// `A_t`, zero at the origin.
    pub fn age(&self) -> u64 {
        match *self {
            ChainState::Origin => 0,
            ChainState::Excursion { age, .. } => age,
        }
    }

    /// `B_t`, zero at the origin.
    pub fn residual(&self) -> u64 {
        match *self {
            ChainState::Origin => 0,
            ChainState::Excursion { residual, .. } => residual,
        }
    }

    /// `A_t + B_t`.
    pub fn interval(&self) -> u64 {
        self.age() + self.residual()
    }
}

/// A reproducible random stream keyed by `(seed, stream_id)`.
///
/// The seed selects the ChaCha key and the stream id selects one of its
/// 2^64 independent streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream under the same seed, indexed by `index`.
    pub fn substream(&self, index: u64) -> RngStream {
        let id = splitmix64(splitmix64(self.stream_id) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        RngStream::new(self.seed, id)
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Equiprobable ±1.
    #[inline]
    pub fn sign(&mut self) -> i8 {
        if self.rng.next_u32() & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Inverse-CDF sampler for the interval law `{p_n}`.
///
/// The cumulative table runs over `n = 2, 3, …, N` and `τ = 1` takes the
/// mass left over at the far end, so `p_1` never has to be known
/// numerically. A draw `U` past the tabulated mass is settled as `τ = 1`
/// once it also clears the rigorous remainder `Σ_{k>N} p_k ≤ T(N)/(N μ_0)`;
/// otherwise the table doubles.
#[derive(Debug, Clone)]
struct IntervalTable {
    params: Params,
    /// `cdf[i] = Σ_{k=2}^{i+2} p_k`.
    cdf: Vec<f64>,
    /// `cdf.last() + T(N)/(N μ_0)`.
    settle: f64,
}

impl IntervalTable {
    fn new(params: Params) -> Self {
        let mut table = Self { params, cdf: Vec::new(), settle: 0.0 };
        table.extend_to(FIRST_TABLE_LEN);
        table
    }

    fn last_n(&self) -> u64 {
        self.cdf.len() as u64 + 1
    }

    fn extend_to(&mut self, n_max: u64) {
        let mut acc = self.cdf.last().copied().unwrap_or(0.0);
        self.cdf.reserve((n_max - self.last_n()) as usize);
        for n in self.last_n() + 1..=n_max {
            acc += self.params.mu_linear(n) / MU_ORIGIN;
            self.cdf.push(acc);
        }
        let nf = n_max as f64;
        self.settle = acc + self.params.log_interval_tail(n_max).exp() / (nf * MU_ORIGIN);
    }

    #[inline]
    fn sample(&mut self, u: f64) -> u64 {
        loop {
            if u >= self.settle {
                return 1;
            }
            if u < *self.cdf.last().expect("table is never empty") {
                return self.cdf.partition_point(|&c| c <= u) as u64 + 2;
            }
            let n = self.last_n();
            if n >= MAX_TABLE_LEN {
                return 1;
            }
            self.extend_to(2 * n);
        }
    }
}

/// Single-owner sampler for one stream of chain states.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    params: Params,
    inv_alpha: f64,
    intervals: IntervalTable,
}

impl ChainSampler {
    pub fn new(params: Params) -> Self {
        Self { params, inv_alpha: 1.0 / params.alpha(), intervals: IntervalTable::new(params) }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Draws from the size-biased law `Pr[τ = m] = (m-1) μ_m / e^{-1}`
    /// by inverting the closed-form tail `exp(-m^α)`.
    pub fn sample_size_biased_interval(&self, rng: &mut RngStream) -> u64 {
        // V = e^{-1} U, U in (0, 1); find m with T(m) <= V < T(m-1).
        let level = 1.0 - rng.open01().ln();
        let alpha = self.params.alpha();
        let z = level.powf(self.inv_alpha);
        if !(z < MAX_INTERVAL as f64) {
            return MAX_INTERVAL;
        }
        let mut m = (z.ceil() as u64).max(2);
        while m > 2 && ((m - 1) as f64).powf(alpha) >= level {
            m -= 1;
        }
        while (m as f64).powf(alpha) < level {
            m += 1;
        }
        m
    }

    /// One draw from the stationary law μ.
    pub fn sample_stationary_state(&self, rng: &mut RngStream) -> ChainState {
        if rng.unit() < MU_ORIGIN {
            return ChainState::Origin;
        }
        let tau = self.sample_size_biased_interval(rng);
        let age = rng.gen_range(1..tau);
        ChainState::Excursion { age, residual: tau - age }
    }

    /// One draw from `{p_n}`.
    #[inline]
    pub fn sample_p_interval(&mut self, rng: &mut RngStream) -> u64 {
        let u = rng.unit();
        self.intervals.sample(u)
    }

    /// One transition of the chain. Only the origin consumes randomness.
    #[inline]
    pub fn step(&mut self, state: ChainState, rng: &mut RngStream) -> ChainState {
        match state {
            ChainState::Excursion { age, residual } if residual > 1 => {
                ChainState::Excursion { age: age + 1, residual: residual - 1 }
            }
            ChainState::Excursion { .. } => ChainState::Origin,
            ChainState::Origin => match self.sample_p_interval(rng) {
                1 => ChainState::Origin,
                tau => ChainState::Excursion { age: 1, residual: tau - 1 },
            },
        }
    }

    /// States at times `1..=n` of the stationary chain.
    pub fn run_path(&mut self, n: usize, rng: &mut RngStream) -> Vec<ChainState> {
        let mut states = Vec::with_capacity(n);
        if n == 0 {
            return states;
        }
        let mut state = self.sample_stationary_state(rng);
        states.push(state);
        for _ in 1..n {
            state = self.step(state, rng);
            states.push(state);
        }
        states
    }
}

/// Result of pushing the truncated stationary law through one kernel step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityCheck {
    /// L1 distance between `μP` and `μ` on states with `A + B ≤ N`.
    pub l1_truncated: f64,
    /// Mass of `μ` and of `μP` on states with `A + B > N`.
    pub outside_mass: f64,
    /// `l1_truncated + outside_mass`, an upper bound on the full L1 distance.
    pub l1_bound: f64,
}

/// Applies the exact transition kernel to μ restricted to `A + B ≤ N` and
/// measures how far the result is from μ.
///
/// The kernel moves `(k, l) → (k+1, l-1)` inside a diagonal, sends `(n-1, 1)`
/// to the origin and spreads the origin over `(1, n-1)` with weights `p_n`.
/// Each diagonal is materialized point by point.
pub fn stationarity_check(table: &MeasureTable) -> crate::error::Result<StationarityCheck> {
    let params = table.params();
    let big_n = table.truncation_n();
    let mu0 = table.mu(0)?;
    let p1 = params.p_one()?.value;

    let mut to_origin = mu0 * p1;
    let mut l1 = 0.0;
    let mut before = Vec::new();
    let mut after = Vec::new();
    for n in 2..=big_n {
        let mass = table.mu(n)?;
        let points = (n - 1) as usize;
        before.clear();
        before.resize(points, mass);
        after.clear();
        after.resize(points, 0.0);
        // index i holds age i + 1
        after[0] = mu0 * params.log_p(n)?.exp();
        for age in 1..points {
            after[age] = before[age - 1];
        }
        to_origin += before[points - 1];
        l1 += before.iter().zip(&after).map(|(b, a)| (a - b).abs()).sum::<f64>();
    }
    l1 += (to_origin - mu0).abs();

    let tail = params.log_interval_tail(big_n).exp();
    let outside_mass = tail + tail / big_n as f64;
    Ok(StationarityCheck { l1_truncated: l1, outside_mass, l1_bound: l1 + outside_mass })
}

/// Expected stationary probability of the origin, `1 - e^{-1}`.
pub fn origin_probability() -> f64 {
    1.0 - 1.0 / E
}
