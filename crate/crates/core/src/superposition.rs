//! Sums of independent component processes, one per window, realizing a
//! finite union of anomalous windows.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain_sampler::{ChainSampler, RngStream};
use crate::error::{Error, Result};
use crate::process_paths::{generate_path, SignedPath};
use crate::renewal_measure::{Params, ScaleWindow};
use crate::tail_oracles::predicted_rate;

/// Ordered disjoint open windows `0 < u_1 < v_1 < u_2 < ... < v_m ≤ 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScaleWindow>", into = "Vec<ScaleWindow>")]
pub struct WindowSet {
    windows: Vec<ScaleWindow>,
}

impl WindowSet {
    pub fn new(windows: Vec<ScaleWindow>) -> Result<Self> {
        for w in &windows {
            ScaleWindow::new(w.u, w.v)?;
        }
        for pair in windows.windows(2) {
            if !(pair[0].v < pair[1].u) {
                return Err(Error::Domain(format!(
                    "windows must be listed in increasing order and be disjoint: ({}, {}) then ({}, {})",
                    pair[0].u, pair[0].v, pair[1].u, pair[1].v
                )));
            }
        }
        Ok(Self { windows })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let windows = pairs.iter().map(|&(u, v)| ScaleWindow::new(u, v)).collect::<Result<Vec<_>>>()?;
        Self::new(windows)
    }

    pub fn windows(&self) -> &[ScaleWindow] {
        &self.windows
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn contains(&self, gamma: f64) -> bool {
        self.windows.iter().any(|w| w.contains(gamma))
    }

    pub fn is_endpoint(&self, gamma: f64) -> bool {
        self.windows.iter().any(|w| w.u == gamma || w.v == gamma)
    }
}

impl TryFrom<Vec<ScaleWindow>> for WindowSet {
    type Error = Error;

    fn try_from(windows: Vec<ScaleWindow>) -> Result<Self> {
        Self::new(windows)
    }
}

impl From<WindowSet> for Vec<ScaleWindow> {
    fn from(set: WindowSet) -> Self {
        set.windows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub params: Params,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeProcess {
    pub components: Vec<Component>,
    /// `√(Σ σ_i²)`.
    pub combined_sigma: f64,
}

/// One component per window, with `σ² = Σ σ_i²`.
pub fn build_composite(windows: &WindowSet, tol: f64) -> Result<CompositeProcess> {
    if windows.is_empty() {
        return Err(Error::EmptyWindowSet);
    }
    let components = windows
        .windows()
        .iter()
        .map(|&w| {
            let params = Params::from_window(w)?;
            let sigma = params.stats(tol)?.sigma;
            Ok(Component { params, sigma })
        })
        .collect::<Result<Vec<_>>>()?;
    let combined_sigma = components.iter().map(|c| c.sigma * c.sigma).sum::<f64>().sqrt();
    Ok(CompositeProcess { components, combined_sigma })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositePath {
    /// Unnormalized component paths.
    pub components: Vec<SignedPath>,
    /// `Σ_i X_t^{(i)} / σ` for `t = 1..=n`.
    pub x: Vec<f64>,
}

/// Component `i` runs on `rng.substream(i)`, so components are independent
/// and the result does not depend on scheduling.
pub fn sample_composite(composite: &CompositeProcess, n: usize, rng: &RngStream) -> CompositePath {
    let components: Vec<SignedPath> = composite
        .components
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut stream = rng.substream(i as u64);
            generate_path(&mut ChainSampler::new(c.params), n, &mut stream)
        })
        .collect();
    let mut x = vec![0.0; n];
    for path in &components {
        for (acc, v) in x.iter_mut().zip(&path.x) {
            *acc += v;
        }
    }
    for v in &mut x {
        *v /= composite.combined_sigma;
    }
    CompositePath { components, x }
}

pub fn sample_composite_path(composite: &CompositeProcess, n: usize, rng: &RngStream) -> Vec<f64> {
    sample_composite(composite, n, rng).x
}

/// 0 for `γ` inside any window, `-c²/2` elsewhere.
pub fn composite_predicted_rate(windows: &WindowSet, gamma: f64, c: f64) -> Result<f64> {
    predicted_rate(windows, gamma, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process_paths::decompose;
    use crate::tail_oracles::tilde_variance_exact;
    use approx::assert_relative_eq;

    fn two_windows() -> WindowSet {
        WindowSet::from_pairs(&[(0.1, 0.15), (0.25, 0.4)]).unwrap()
    }

    #[test]
    fn window_set_validation() {
        assert!(WindowSet::from_pairs(&[(0.25, 0.4), (0.1, 0.15)]).is_err());
        assert!(WindowSet::from_pairs(&[(0.1, 0.3), (0.25, 0.4)]).is_err());
        assert!(WindowSet::from_pairs(&[(0.1, 0.2), (0.2, 0.4)]).is_err());
        assert!(WindowSet::from_pairs(&[(0.3, 0.6)]).is_err());
        assert!(WindowSet::from_pairs(&[]).unwrap().is_empty());
        let json = serde_json::to_string(&two_windows()).unwrap();
        let back: WindowSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, two_windows());
        assert!(serde_json::from_str::<WindowSet>(r#"[{"u":0.3,"v":0.2}]"#).is_err());
    }

    #[test]
    fn single_window_component() {
        let set = WindowSet::from_pairs(&[(0.25, 0.4)]).unwrap();
        let comp = build_composite(&set, 1e-12).unwrap();
        assert_eq!(comp.components.len(), 1);
        assert_relative_eq!(comp.components[0].params.alpha(), 0.3, max_relative = 1e-12);
        assert_relative_eq!(comp.components[0].params.beta(), 0.05, max_relative = 1e-12);
        assert_relative_eq!(comp.combined_sigma, comp.components[0].sigma, max_relative = 1e-15);
    }

    #[test]
    fn two_windows_quadrature_and_round_trip() {
        let set = two_windows();
        let comp = build_composite(&set, 1e-12).unwrap();
        let sq: f64 = comp.components.iter().map(|c| c.sigma.powi(2)).sum();
        assert_relative_eq!(comp.combined_sigma.powi(2), sq, max_relative = 1e-12);
        for (c, w) in comp.components.iter().zip(set.windows()) {
            let back = c.params.window();
            assert!((back.u - w.u).abs() < 1e-12 && (back.v - w.v).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_window_set_is_rejected() {
        let empty = WindowSet::new(vec![]).unwrap();
        assert_eq!(build_composite(&empty, 1e-12), Err(Error::EmptyWindowSet));
    }

    #[test]
    fn composite_predicted_rate_examples() {
        let set = two_windows();
        assert_eq!(composite_predicted_rate(&set, 0.3, 1.0).unwrap(), 0.0);
        assert_eq!(composite_predicted_rate(&set, 0.12, 1.0).unwrap(), 0.0);
        assert_eq!(composite_predicted_rate(&set, 0.2, 3.0).unwrap(), -4.5);
        assert_eq!(composite_predicted_rate(&set, 0.05, 1.0).unwrap(), -0.5);
        assert_eq!(composite_predicted_rate(&set, 0.45, 1.0).unwrap(), -0.5);
        assert!(composite_predicted_rate(&set, 0.15, 1.0).is_err());
        assert!(composite_predicted_rate(&set, 0.1, 1.0).is_err());
    }

    #[test]
    fn composite_paths_are_bounded_and_deterministic() {
        let comp = build_composite(&two_windows(), 1e-12).unwrap();
        let rng = RngStream::new(3, 1);
        let a = sample_composite(&comp, 2_000, &rng);
        let b = sample_composite(&comp, 2_000, &rng);
        assert_eq!(a, b);
        let bound = comp.components.len() as f64 / comp.combined_sigma;
        assert!(a.x.iter().all(|v| v.abs() <= bound));
        for (t, v) in a.x.iter().enumerate() {
            let raw: f64 = a.components.iter().map(|p| p.x[t]).sum();
            assert_relative_eq!(*v, raw / comp.combined_sigma, max_relative = 1e-15);
        }
    }

    #[test]
    fn component_streams_are_uncorrelated() {
        let comp = build_composite(&two_windows(), 1e-12).unwrap();
        let n = 1_000;
        let reps = 400;
        let mut products = Vec::with_capacity(reps);
        for r in 0..reps {
            let path = sample_composite(&comp, n, &RngStream::new(11, r as u64));
            let s1: f64 = path.components[0].x.iter().sum();
            let s2: f64 = path.components[1].x.iter().sum();
            products.push(s1 * s2 / n as f64);
        }
        let mean = products.iter().sum::<f64>() / reps as f64;
        let var = products.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "{mean} vs se {se}");
    }

    #[test]
    fn normalized_tilde_variance_matches_quadrature() {
        let comp = build_composite(&two_windows(), 1e-12).unwrap();
        let n = 10_000u64;
        let reps = 3_000;
        let sums: Vec<f64> = (0..reps)
            .map(|r| {
                let path = sample_composite(&comp, n as usize, &RngStream::new(12, r));
                path.components.iter().map(|p| decompose(p).s_tilde).sum::<f64>() / comp.combined_sigma
            })
            .collect();
        let mean = sums.iter().sum::<f64>() / reps as f64;
        let var = sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (reps - 1) as f64 / n as f64;
        let exact: f64 = comp.components.iter().map(|c| tilde_variance_exact(&c.params, n)).sum::<f64>()
            / comp.combined_sigma.powi(2);
        // sample variance of 3000 draws: relative SE about sqrt(2/3000) times a kurtosis factor
        assert!((var - exact).abs() / exact < 0.15, "{var} vs {exact}");
        assert!((exact - 1.0).abs() < 0.05, "finite-horizon ratio {exact}");
    }
}
