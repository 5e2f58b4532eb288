//! Tail probabilities and rates at scale `γ`: Monte Carlo estimates, exact
//! enumeration of the last boundary term, and closed-form log-domain
//! certificates usable at horizons far beyond simulation.

pub mod certificates;
pub mod exact;
pub mod mc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superposition::WindowSet;

pub use certificates::{case1_upper, case2_certificate, CertificateKind, RateCertificate};
pub use exact::{
    autocovariance_dominance, autocovariance_exact, boundary_tail_exact, tilde_variance_exact, BoundaryTail,
    DEFAULT_TAIL_SHARE,
};
pub use mc::{mc_tail, tally, tally_with, wilson_interval, Tally, TailEstimate, Target};

/// The event `S_n / √n > c n^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateQuery {
    pub n: u64,
    pub gamma: f64,
    pub c: f64,
}

impl RateQuery {
    pub fn new(n: u64, gamma: f64, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("horizon n must be >= 1".into()));
        }
        if !(gamma > 0.0 && gamma < 0.5) {
            return Err(Error::Domain(format!("gamma must lie in (0, 0.5), got {gamma}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("c must be a positive finite number, got {c}")));
        }
        Ok(Self { n, gamma, c })
    }

    /// `c n^{γ+1/2}`, the threshold in sum units.
    pub fn threshold(&self) -> f64 {
        self.c * (self.n as f64).powf(self.gamma + 0.5)
    }
}

/// `log_p / n^{2γ}`.
pub fn rate_transform(log_p: f64, n: u64, gamma: f64) -> f64 {
    if log_p == 0.0 {
        return 0.0;
    }
    log_p / (n as f64).powf(2.0 * gamma)
}

/// `-c²/2`, the normal moderate-deviation rate.
pub fn gaussian_reference(c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    Ok(-0.5 * c * c)
}

/// Limiting rate at scale `γ`: 0 inside a window, `-c²/2` elsewhere.
/// Window endpoints are excluded because both sets are open.
pub fn predicted_rate(windows: &WindowSet, gamma: f64, c: f64) -> Result<f64> {
    let normal = gaussian_reference(c)?;
    if !(gamma > 0.0 && gamma < 0.5) || windows.is_endpoint(gamma) {
        return Err(Error::Endpoint { gamma });
    }
    Ok(if windows.contains(gamma) { 0.0 } else { normal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renewal_measure::ScaleWindow;
    use approx::assert_relative_eq;

    #[test]
    fn rate_transform_examples() {
        assert_relative_eq!(rate_transform(-50.0, 10_000, 0.25), -0.5, max_relative = 1e-14);
        assert_eq!(rate_transform(0.0, 77, 0.3), 0.0);
        assert_relative_eq!(rate_transform(-12.5, 10_000, 0.25), -0.125, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_reference_examples() {
        assert_eq!(gaussian_reference(1.0).unwrap(), -0.5);
        assert_eq!(gaussian_reference(2.0).unwrap(), -2.0);
        let tiny = gaussian_reference(1e-9).unwrap();
        assert!(tiny < 0.0 && tiny > -1e-17);
        assert!(gaussian_reference(0.0).is_err());
    }

    #[test]
    fn predicted_rate_examples() {
        let w = WindowSet::new(vec![ScaleWindow::new(0.25, 0.4).unwrap()]).unwrap();
        assert_eq!(predicted_rate(&w, 0.3, 1.0).unwrap(), 0.0);
        assert_eq!(predicted_rate(&w, 0.1, 2.0).unwrap(), -2.0);
        assert_eq!(predicted_rate(&w, 0.25, 1.0), Err(Error::Endpoint { gamma: 0.25 }));
        assert!(predicted_rate(&w, 0.4, 1.0).is_err());
        assert!(predicted_rate(&w, 0.5, 1.0).is_err());
    }

    #[test]
    fn query_threshold_and_validation() {
        let q = RateQuery::new(10_000, 0.25, 2.0).unwrap();
        assert_relative_eq!(q.threshold(), 2000.0, max_relative = 1e-14);
        assert!(RateQuery::new(0, 0.25, 1.0).is_err());
        assert!(RateQuery::new(10, 0.5, 1.0).is_err());
        assert!(RateQuery::new(10, 0.2, -1.0).is_err());
    }
}
