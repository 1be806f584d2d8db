use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::stats::{mean_se, wilson, Z95};
use crate::arith::ratio_to_f64;

/// One named quantity with an optional 95% interval and exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    /// Undefined values (e.g. a mean over no samples) are NaN, written as `null`.
    #[serde(deserialize_with = "nan_from_null")]
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Exact rational as `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

fn nan_from_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Rounds to 15 significant digits so every emitted format shows the same number.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// `"p/q"`, with `"p/1"` for integers.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Estimate {
    pub fn value(name: impl Into<String>, value: f64) -> Self {
        Estimate {
            name: name.into(),
            value: round15(value),
            ci_low: None,
            ci_high: None,
            exact: None,
        }
    }

    pub fn with_ci(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Estimate {
            name: name.into(),
            value: round15(value),
            ci_low: lo.is_finite().then(|| round15(lo)),
            ci_high: hi.is_finite().then(|| round15(hi)),
            exact: None,
        }
    }

    /// Proportion `hits / n` with a Wilson score interval.
    pub fn proportion(name: impl Into<String>, hits: u64, n: u64) -> Self {
        let p = if n == 0 { f64::NAN } else { hits as f64 / n as f64 };
        let (lo, hi) = wilson(hits, n, Z95);
        Self::with_ci(name, p, lo, hi)
    }

    /// Sample mean with a normal-approximation interval.
    pub fn mean(name: impl Into<String>, values: &[f64]) -> Self {
        let (m, se) = mean_se(values);
        Self::with_ci(name, m, m - Z95 * se, m + Z95 * se)
    }

    pub fn exact(name: impl Into<String>, r: &BigRational) -> Self {
        let mut e = Self::value(name, ratio_to_f64(r));
        e.exact = Some(rational_string(r));
        e
    }

    pub fn count(name: impl Into<String>, c: u64) -> Self {
        Self::value(name, c as f64)
    }

    pub fn ci(&self) -> Option<(f64, f64)> {
        Some((self.ci_low?, self.ci_high?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub shards: usize,
    pub samples: u64,
    pub version: String,
}

/// Machine-readable result of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub estimates: Vec<Estimate>,
    pub provenance: Provenance,
    /// Wall-clock time; the only field that varies between identical runs.
    #[serde(default)]
    pub duration_ms: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, shards: usize, samples: u64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            estimates: Vec::new(),
            provenance: Provenance {
                seed,
                shards,
                samples,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            duration_ms: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
        self
    }

    pub fn push(&mut self, e: Estimate) {
        self.estimates.push(e);
    }

    pub fn get(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    /// Value of a named estimate; panics if absent.
    pub fn value_of(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("report {} has no estimate {name}", self.experiment))
            .value
    }

    /// The report with the timing zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        ExperimentReport {
            duration_ms: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = ExperimentReport::new("demo", 7, 4, 100).param("n", 3).param("primes", [2, 3]);
        r.push(Estimate::proportion("p", 25, 100));
        r.push(Estimate::exact("q", &BigRational::new(25.into(), 32.into())));
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get("q").unwrap().exact.as_deref(), Some("25/32"));
        assert_eq!(back.value_of("q"), 0.78125);
    }

    #[test]
    fn undefined_mean_round_trips() {
        let mut r = ExperimentReport::new("demo", 0, 1, 0);
        r.push(Estimate::mean("empty", &[]));
        let json = r.to_json();
        assert!(json.contains("\"value\": null"));
        let back: ExperimentReport = serde_json::from_str(&json).unwrap();
        assert!(back.value_of("empty").is_nan());
        assert_eq!(back.estimates[0].ci(), None);
    }

    #[test]
    fn rounding() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(round15(1.0 / 3.0), 0.333333333333333);
        assert!(round15(f64::NAN).is_nan());
    }
}
