//! Experiment reports and binomial confidence intervals.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::sampler::SamplerConfig;

/// Version of the JSON layout of every report.
pub const SCHEMA_VERSION: u32 = 1;

/// Two-sided normal quantiles.
pub const Z95: f64 = 1.959_963_984_540_054;
pub const Z99: f64 = 2.575_829_303_548_900_4;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Outcome of a Monte Carlo experiment counting one kind of success.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub version: String,
    pub experiment: String,
    pub config: SamplerConfig,
    pub params: BTreeMap<String, Value>,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub wilson_ci_95: (f64, f64),
    pub wilson_ci_99: (f64, f64),
    pub details: BTreeMap<String, Value>,
    pub wall_time: f64,
}

impl ExperimentReport {
    pub(crate) fn new(
        experiment: &str,
        config: SamplerConfig,
        params: BTreeMap<String, Value>,
        trials: u64,
        successes: u64,
    ) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            version: crate::VERSION.to_string(),
            experiment: experiment.to_string(),
            config,
            params,
            trials,
            successes,
            estimate: successes as f64 / trials as f64,
            wilson_ci_95: wilson_interval(successes, trials, Z95),
            wilson_ci_99: wilson_interval(successes, trials, Z99),
            details: BTreeMap::new(),
            wall_time: 0.0,
        }
    }

    pub fn contains_95(&self, p: f64) -> bool {
        self.wilson_ci_95.0 <= p && p <= self.wilson_ci_95.1
    }

    pub fn contains_99(&self, p: f64) -> bool {
        self.wilson_ci_99.0 <= p && p <= self.wilson_ci_99.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // statsmodels proportion_confint(method="wilson")
        let (lo, hi) = wilson_interval(1, 10, Z95);
        assert!((lo - 0.017_876_213_095_072_924).abs() < 1e-12, "{lo}");
        assert!((hi - 0.404_150_026_795_238_54).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036_993_498_206_985_69).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson_interval(50, 100, Z99);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!(lo < 0.5 && hi > 0.5);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }
}
