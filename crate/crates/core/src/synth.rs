//! Synthetic timing distributions with controlled overlap.
//!
//! Every family has a hard floor at `location` (seconds) and a right tail,
//! which is what repeated execution times of one kernel look like:
//!
//! * `lognormal`: `location + scale · exp(skew · Z)`, `Z ~ N(0, 1)`
//! * `shifted-gamma`: `location + scale · G`, `G ~ Gamma(shape = skew, 1)`
//! * `empirical-resample`: `location + scale · (x - min(pool))`, `x` drawn
//!   with replacement from a pool of real measurements. With `scale = 1` and
//!   `location = min(pool)` this replays the pool's distribution.

use std::path::PathBuf;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{load_dataset, DatasetFormat, TimingDataset};
use crate::rng::{derive_seed, stream_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Lognormal,
    ShiftedGamma,
    EmpiricalResample,
}

/// Measurements of one algorithm in a saved dataset file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSource {
    pub path: PathBuf,
    pub algorithm: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub name: String,
    pub family: Family,
    pub location: f64,
    pub scale: f64,
    #[serde(default)]
    pub skew: f64,
    pub n: usize,
    pub seed: u64,
    /// Inline pool for `empirical-resample`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
    /// File-backed pool for `empirical-resample`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<EmpiricalSource>,
}

impl DistributionSpec {
    pub fn lognormal(name: impl Into<String>, location: f64, scale: f64, skew: f64, n: usize, seed: u64) -> Self {
        Self {
            name: name.into(),
            family: Family::Lognormal,
            location,
            scale,
            skew,
            n,
            seed,
            samples: None,
            source: None,
        }
    }

    pub fn shifted_gamma(name: impl Into<String>, location: f64, scale: f64, shape: f64, n: usize, seed: u64) -> Self {
        Self {
            family: Family::ShiftedGamma,
            ..Self::lognormal(name, location, scale, shape, n, seed)
        }
    }

    pub fn empirical(name: impl Into<String>, location: f64, scale: f64, pool: Vec<f64>, n: usize, seed: u64) -> Self {
        Self {
            family: Family::EmpiricalResample,
            samples: Some(pool),
            ..Self::lognormal(name, location, scale, 0.0, n, seed)
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidSpec {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.location.is_finite() && self.location > 0.0) {
            return Err(self.invalid("location must be finite and > 0"));
        }
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(self.invalid("scale must be finite and >= 0"));
        }
        if self.n == 0 {
            return Err(self.invalid("n must be at least 1"));
        }
        match self.family {
            Family::Lognormal if !(self.skew.is_finite() && self.skew >= 0.0) => {
                Err(self.invalid("lognormal skew must be finite and >= 0"))
            }
            Family::ShiftedGamma if !(self.skew.is_finite() && self.skew > 0.0) => {
                Err(self.invalid("gamma shape (skew) must be finite and > 0"))
            }
            _ => Ok(()),
        }
    }

    fn pool(&self) -> Result<Vec<f64>> {
        let pool = match (&self.samples, &self.source) {
            (Some(s), _) => s.clone(),
            (None, Some(src)) => {
                let format = DatasetFormat::from_path(&src.path).unwrap_or(DatasetFormat::Json);
                let data = load_dataset(&src.path, format)?;
                data.get(&src.algorithm)
                    .ok_or_else(|| Error::UnknownAlgorithm(src.algorithm.clone()))?
                    .to_vec()
            }
            (None, None) => return Err(self.invalid("empirical-resample needs `samples` or `source`")),
        };
        if pool.is_empty() || pool.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(self.invalid("empirical pool must be non-empty, finite and positive"));
        }
        Ok(pool)
    }

    /// Draws `n` values.
    pub fn sample(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let mut rng = stream_rng(self.seed);
        let values = match self.family {
            Family::Lognormal => (0..self.n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    self.location + self.scale * (self.skew * z).exp()
                })
                .collect(),
            Family::ShiftedGamma => {
                let gamma = Gamma::new(self.skew, 1.0).map_err(|e| self.invalid(e.to_string()))?;
                (0..self.n)
                    .map(|_| self.location + self.scale * gamma.sample(&mut rng))
                    .collect()
            }
            Family::EmpiricalResample => {
                let pool = self.pool()?;
                let floor = pool.iter().copied().fold(f64::INFINITY, f64::min);
                (0..self.n)
                    .map(|_| self.location + self.scale * (pool[rng.random_range(0..pool.len())] - floor))
                    .collect()
            }
        };
        Ok(values)
    }
}

/// Samples every spec into one dataset; all specs must agree on `n`.
pub fn generate(specs: &[DistributionSpec]) -> Result<TimingDataset> {
    let Some(first) = specs.first() else {
        return Err(Error::EmptyDataset);
    };
    if let Some(odd) = specs.iter().find(|s| s.n != first.n) {
        return Err(odd.invalid(format!(
            "n = {} differs from n = {} of `{}`",
            odd.n, first.n, first.name
        )));
    }
    let columns = specs
        .iter()
        .map(|s| Ok((s.name.clone(), s.sample()?)))
        .collect::<Result<Vec<_>>>()?;
    TimingDataset::new(columns)
}

const MS: f64 = 1e-3;

/// Three variants in the shape of the OLS illustration: Yellow and Blue share
/// one distribution, Red sits 40% higher.
pub fn twin_layout(n: usize, seed: u64) -> Vec<DistributionSpec> {
    let (loc, scale, skew) = (1.5 * MS, 0.25 * MS, 0.5);
    vec![
        DistributionSpec::lognormal("Yellow", loc, scale, skew, n, derive_seed(seed, 0)),
        DistributionSpec::lognormal("Blue", loc, scale, skew, n, derive_seed(seed, 1)),
        DistributionSpec::lognormal("Red", 1.4 * loc, scale, skew, n, derive_seed(seed, 2)),
    ]
}

/// Four OLS-style variants: `alg0` and `alg2` matched, `alg1` overlapping
/// but with a slightly higher floor, `alg3` clearly slower (means of about
/// 1.76 ms against 2.61 ms).
pub fn threshold_layout(n: usize, seed: u64) -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::lognormal("alg0", 1.395 * MS, 0.305 * MS, 0.6, n, derive_seed(seed, 0)),
        DistributionSpec::lognormal("alg1", 1.41 * MS, 0.31 * MS, 0.6, n, derive_seed(seed, 1)),
        DistributionSpec::lognormal("alg2", 1.395 * MS, 0.305 * MS, 0.6, n, derive_seed(seed, 2)),
        DistributionSpec::lognormal("alg3", 1.65 * MS, 0.802 * MS, 0.6, n, derive_seed(seed, 3)),
    ]
}

/// Three overlapping variants where `alg1` has the lowest floor, plus a slow one.
pub fn floor_layout(n: usize, seed: u64) -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::lognormal("alg0", 1.42 * MS, 0.30 * MS, 0.6, n, derive_seed(seed, 0)),
        DistributionSpec::lognormal("alg1", 1.36 * MS, 0.36 * MS, 0.6, n, derive_seed(seed, 1)),
        DistributionSpec::lognormal("alg2", 1.42 * MS, 0.30 * MS, 0.6, n, derive_seed(seed, 2)),
        DistributionSpec::lognormal("alg3", 1.50 * MS, 0.926 * MS, 0.6, n, derive_seed(seed, 3)),
    ]
}

/// One problem of a precision/recall suite: a small cluster of equally fast
/// variants followed by variants at increasing gaps, some marginal.
pub fn suite_problem(n: usize, seed: u64) -> Vec<DistributionSpec> {
    let mut rng = stream_rng(seed);
    let fast = rng.random_range(1..=3);
    let gaps = [0.03, 0.05, 0.08, 0.12, 0.2, 0.4];
    let base = rng.random_range(0.5..5.0) * MS;
    let (scale, skew) = (0.2 * base, 0.6);
    let mut specs = Vec::new();
    for i in 0..fast {
        specs.push(DistributionSpec::lognormal(
            format!("v{i}"),
            base,
            scale,
            skew,
            n,
            derive_seed(seed, i as u64),
        ));
    }
    for (g, gap) in gaps.iter().enumerate() {
        let i = fast + g;
        specs.push(DistributionSpec::lognormal(
            format!("v{i}"),
            base * (1.0 + gap),
            scale,
            skew,
            n,
            derive_seed(seed, i as u64),
        ));
    }
    specs
}

/// `problems` independent suite problems with `n` measurements each.
pub fn suite(problems: usize, n: usize, seed: u64) -> Result<Vec<TimingDataset>> {
    (0..problems)
        .map(|p| generate(&suite_problem(n, derive_seed(seed, p as u64))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scale_is_constant() {
        let d = generate(&[DistributionSpec::lognormal("c", 2e-3, 0.0, 0.7, 8, 1)]).unwrap();
        assert!(d.times(0).iter().all(|&v| v == 2e-3 + 0.0));
        let d = generate(&[DistributionSpec::shifted_gamma("g", 2e-3, 0.0, 2.0, 4, 1)]).unwrap();
        assert_eq!(d.times(0), &[2e-3; 4]);
    }

    #[test]
    fn seeded_and_positive() {
        let specs = threshold_layout(50, 3);
        let a = generate(&specs).unwrap();
        assert_eq!(a, generate(&specs).unwrap());
        assert_ne!(a, generate(&threshold_layout(50, 4)).unwrap());
        assert!(a.iter().all(|(_, t)| t.iter().all(|&v| v > 0.0)));
    }

    #[test]
    fn moments_roughly_recovered() {
        let t = DistributionSpec::lognormal("x", 1.0, 0.5, 0.4, 20_000, 7)
            .sample()
            .unwrap();
        let mean = t.iter().sum::<f64>() / t.len() as f64;
        let expected = 1.0 + 0.5 * (0.4f64 * 0.4 / 2.0).exp();
        assert!((mean - expected).abs() < 0.01, "{mean} vs {expected}");

        let t = DistributionSpec::shifted_gamma("g", 1.0, 0.1, 3.0, 20_000, 7)
            .sample()
            .unwrap();
        let mean = t.iter().sum::<f64>() / t.len() as f64;
        assert!((mean - 1.3).abs() < 0.01, "{mean}");
        assert!(t.iter().all(|&v| v > 1.0));
    }

    #[test]
    fn threshold_layout_means() {
        let d = generate(&threshold_layout(20_000, 1)).unwrap();
        let mean = |i: usize| d.times(i).iter().sum::<f64>() / d.n() as f64 / MS;
        assert!((mean(0) - 1.76).abs() < 0.02, "{}", mean(0));
        assert!((mean(3) - 2.61).abs() < 0.05, "{}", mean(3));
    }

    #[test]
    fn empirical_replays_pool() {
        let pool = vec![3.0, 1.0, 2.0];
        let t = DistributionSpec::empirical("e", 1.0, 1.0, pool.clone(), 200, 2)
            .sample()
            .unwrap();
        assert!(t.iter().all(|v| pool.contains(v)));
        assert!(pool.iter().all(|p| t.contains(p)));
    }

    #[test]
    fn empirical_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("src.json");
        let src = TimingDataset::new([("k", vec![0.5, 0.7])]).unwrap();
        crate::model::save_dataset(&src, &path, DatasetFormat::Json).unwrap();
        let spec = DistributionSpec {
            samples: None,
            source: Some(EmpiricalSource {
                path,
                algorithm: "k".into(),
            }),
            ..DistributionSpec::empirical("e", 0.5, 1.0, vec![], 10, 1)
        };
        assert!(spec
            .sample()
            .unwrap()
            .iter()
            .all(|&v| v == 0.5 || (v - 0.7).abs() < 1e-12));
    }

    #[test]
    fn invalid_specs() {
        assert!(DistributionSpec::lognormal("x", 0.0, 1.0, 0.5, 3, 0).sample().is_err());
        assert!(DistributionSpec::lognormal("x", 1.0, -1.0, 0.5, 3, 0).sample().is_err());
        assert!(DistributionSpec::lognormal("x", 1.0, 1.0, 0.5, 0, 0).sample().is_err());
        assert!(DistributionSpec::shifted_gamma("x", 1.0, 1.0, 0.0, 3, 0)
            .sample()
            .is_err());
        assert!(DistributionSpec::empirical("x", 1.0, 1.0, vec![], 3, 0)
            .sample()
            .is_err());
        let mixed = [
            DistributionSpec::lognormal("a", 1.0, 1.0, 0.5, 3, 0),
            DistributionSpec::lognormal("b", 1.0, 1.0, 0.5, 4, 0),
        ];
        assert!(generate(&mixed).is_err());
        assert!(generate(&[]).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let text =
            r#"[{"name":"a","family":"shifted-gamma","location":0.001,"scale":0.0002,"skew":2.0,"n":5,"seed":1}]"#;
        let specs: Vec<DistributionSpec> = serde_json::from_str(text).unwrap();
        assert_eq!(specs[0].family, Family::ShiftedGamma);
        assert_eq!(generate(&specs).unwrap().n(), 5);
    }
}
