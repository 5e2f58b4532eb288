//! Monte Carlo tail estimation over sharded, independently seeded streams.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::chain_sampler::RngStream;
use crate::error::{Error, Result};
use crate::process_paths::{PathSimulator, SumDecomposition};
use crate::renewal_measure::Params;

use super::RateQuery;

/// Which part of `S_n = S'_n + S̃_n + S''_n` a tail refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Total,
    Tilde,
    /// `S'_n + S''_n`.
    Boundary,
    /// `S''_n` alone, the quantity enumerated by the exact boundary oracle.
    DoublePrime,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::Total, Target::Tilde, Target::Boundary, Target::DoublePrime];

    fn index(self) -> usize {
        self as usize
    }

    pub fn of(self, d: &SumDecomposition) -> f64 {
        match self {
            Target::Total => d.s_total,
            Target::Tilde => d.s_tilde,
            Target::Boundary => d.s_prime + d.s_double_prime,
            Target::DoublePrime => d.s_double_prime,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub reps: u64,
    pub hits: u64,
}

impl TailEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }

    /// Binomial standard error of `p_hat`.
    pub fn standard_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.reps as f64).sqrt()
    }
}

/// Two-sided Wilson interval; at zero hits the upper end is the exact
/// one-sided bound `1 - (1 - confidence)^{1/reps}` (rule of three at 95%).
pub fn wilson_interval(hits: u64, reps: u64, confidence: f64) -> Result<TailEstimate> {
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    if hits > reps {
        return Err(Error::Domain(format!("hits {hits} exceed reps {reps}")));
    }
    let n = reps as f64;
    let p_hat = hits as f64 / n;
    if hits == 0 {
        let ci_high = -((1.0 - confidence).ln() / n).exp_m1();
        return Ok(TailEstimate { p_hat, ci_low: 0.0, ci_high, reps, hits });
    }
    let z = Normal::standard().inverse_cdf(0.5 + 0.5 * confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    Ok(TailEstimate {
        p_hat,
        ci_low: (center - half).clamp(0.0, p_hat),
        ci_high: (center + half).clamp(p_hat, 1.0),
        reps,
        hits,
    })
}

/// Exceedance counts for every [`Target`] over a grid of thresholds, plus
/// first and second moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub reps: u64,
    pub thresholds: Vec<f64>,
    /// `upper[i][target]` counts `value > thresholds[i]`.
    pub upper: Vec<[u64; 4]>,
    /// `lower[i][target]` counts `value < -thresholds[i]`.
    pub lower: Vec<[u64; 4]>,
    pub sum: [f64; 4],
    pub sum_sq: [f64; 4],
}

impl Tally {
    fn empty(thresholds: &[f64]) -> Self {
        Self {
            reps: 0,
            thresholds: thresholds.to_vec(),
            upper: vec![[0; 4]; thresholds.len()],
            lower: vec![[0; 4]; thresholds.len()],
            sum: [0.0; 4],
            sum_sq: [0.0; 4],
        }
    }

    fn record(&mut self, d: &SumDecomposition) {
        self.reps += 1;
        for target in Target::ALL {
            let v = target.of(d);
            let j = target.index();
            self.sum[j] += v;
            self.sum_sq[j] += v * v;
            for (i, &x) in self.thresholds.iter().enumerate() {
                if v > x {
                    self.upper[i][j] += 1;
                }
                if v < -x {
                    self.lower[i][j] += 1;
                }
            }
        }
    }

    fn merge(mut self, other: &Tally) -> Self {
        self.reps += other.reps;
        for i in 0..self.thresholds.len() {
            for j in 0..4 {
                self.upper[i][j] += other.upper[i][j];
                self.lower[i][j] += other.lower[i][j];
            }
        }
        for j in 0..4 {
            self.sum[j] += other.sum[j];
            self.sum_sq[j] += other.sum_sq[j];
        }
        self
    }

    pub fn upper_hits(&self, threshold_index: usize, target: Target) -> u64 {
        self.upper[threshold_index][target.index()]
    }

    pub fn lower_hits(&self, threshold_index: usize, target: Target) -> u64 {
        self.lower[threshold_index][target.index()]
    }

    pub fn mean(&self, target: Target) -> f64 {
        self.sum[target.index()] / self.reps as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self, target: Target) -> f64 {
        let n = self.reps as f64;
        let j = target.index();
        let mean = self.sum[j] / n;
        (self.sum_sq[j] - n * mean * mean) / (n - 1.0)
    }
}

/// Simulates `reps` independent paths of length `n`, split over `shards`
/// substreams of `rng`, and tallies every target against `thresholds`.
///
/// The result depends only on `(rng seed, rng stream, shards, reps)`.
pub fn tally(params: &Params, n: u64, thresholds: &[f64], reps: u64, shards: usize, rng: &RngStream) -> Tally {
    tally_with(params, n, thresholds, reps, shards, rng, |_| {})
}

/// [`tally`] with a per-path observer, run inside each shard.
pub fn tally_with<F>(
    params: &Params,
    n: u64,
    thresholds: &[f64],
    reps: u64,
    shards: usize,
    rng: &RngStream,
    observe: F,
) -> Tally
where
    F: Fn(&SumDecomposition) + Sync,
{
    let shards = shards.max(1) as u64;
    let parts: Vec<Tally> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let share = reps / shards + u64::from(shard < reps % shards);
            let mut stream = rng.substream(shard);
            let mut sim = PathSimulator::new(*params);
            let mut t = Tally::empty(thresholds);
            for _ in 0..share {
                let summary = sim.simulate(n, &mut stream);
                observe(&summary.decomposition);
                t.record(&summary.decomposition);
            }
            t
        })
        .collect();
    parts.iter().fold(Tally::empty(thresholds), |acc, p| acc.merge(p))
}

/// Estimates `Pr[target > c n^{γ+1/2}]` with a Wilson interval.
pub fn mc_tail(
    params: &Params,
    query: &RateQuery,
    target: Target,
    reps: u64,
    confidence: f64,
    shards: usize,
    rng: &RngStream,
) -> Result<TailEstimate> {
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    let t = tally(params, query.n, &[query.threshold()], reps, shards, rng);
    wilson_interval(t.upper_hits(0, target), reps, confidence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_basic_properties() {
        let e = wilson_interval(50, 100, 0.95).unwrap();
        assert!(e.ci_low < 0.5 && 0.5 < e.ci_high);
        assert!((e.ci_low - 0.4038).abs() < 1e-3 && (e.ci_high - 0.5962).abs() < 1e-3);
        let z = wilson_interval(0, 1000, 0.95).unwrap();
        assert_eq!(z.ci_low, 0.0);
        // about 3/n
        assert!((z.ci_high - 3.0 / 1000.0).abs() < 1e-4);
        let all = wilson_interval(10, 10, 0.999).unwrap();
        assert_eq!(all.ci_high, 1.0);
        assert!(wilson_interval(1, 0, 0.9).is_err());
        assert!(wilson_interval(1, 2, 1.0).is_err());
    }

    #[test]
    fn tally_is_deterministic_per_shard_count() {
        let p = Params::new(0.3, 0.05).unwrap();
        let rng = RngStream::new(5, 0);
        let a = tally(&p, 200, &[0.0, 3.0], 3_000, 3, &rng);
        let b = tally(&p, 200, &[0.0, 3.0], 3_000, 3, &rng);
        assert_eq!(a, b);
        assert_eq!(a.reps, 3_000);
    }

    #[test]
    fn tilde_at_zero_threshold_is_at_most_half() {
        let p = Params::new(0.3, 0.05).unwrap();
        // threshold 0: c = 0 is outside RateQuery::new's domain, so build it directly
        let q = RateQuery { n: 1_000, gamma: 0.25, c: 0.0 };
        let e = mc_tail(&p, &q, Target::Tilde, 20_000, 0.99, 2, &RngStream::new(6, 0)).unwrap();
        assert!(e.p_hat <= 0.5 + 3.0 * e.standard_error());
        assert!(e.p_hat > 0.4);
    }

    #[test]
    fn every_target_is_symmetric() {
        let p = Params::new(0.3, 0.05).unwrap();
        let xs = [0.5, 2.0, 5.0, 10.0, 20.0];
        let t = tally(&p, 500, &xs, 40_000, 2, &RngStream::new(8, 0));
        for target in Target::ALL {
            for i in 0..xs.len() {
                let n = t.reps as f64;
                let pu = t.upper_hits(i, target) as f64 / n;
                let pl = t.lower_hits(i, target) as f64 / n;
                // disjoint indicators on the same paths: covariance -pu pl
                let se = ((pu * (1.0 - pu) + pl * (1.0 - pl) + 2.0 * pu * pl) / n).sqrt();
                assert!((pu - pl).abs() <= 3.0 * se + 1e-12, "{target:?} x = {}: {pu} vs {pl}", xs[i]);
            }
        }
    }

    #[test]
    fn boundary_beyond_cap_never_hits() {
        let p = Params::new(0.3, 0.05).unwrap();
        let n = 1_000;
        let cap = crate::process_paths::boundary_sum_cap(&p, n);
        let t = tally(&p, n, &[cap], 50_000, 2, &RngStream::new(7, 0));
        assert_eq!(t.upper_hits(0, Target::Boundary), 0);
        assert_eq!(t.lower_hits(0, Target::Boundary), 0);
    }
}
