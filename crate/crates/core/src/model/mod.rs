//! Domain types shared by every stage of the pipeline.

mod io;
mod plan;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_dataset, save_dataset, DatasetFormat};
pub use plan::{build_plan, MeasurementPlan, PlanSlot};

/// Name of one algorithm variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AlgorithmId(String);

impl AlgorithmId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::EmptyName);
        }
        Ok(Self(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for AlgorithmId {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<AlgorithmId> for String {
    fn from(id: AlgorithmId) -> Self {
        id.0
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for AlgorithmId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Execution times (seconds) of `p` algorithm variants, `N` measurements each.
///
/// Declaration order is significant: it is the tie-break priority, lowest
/// index first.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingDataset {
    algorithms: Vec<AlgorithmId>,
    times: Vec<Vec<f64>>,
}

impl TimingDataset {
    /// Builds a validated dataset from `(name, times)` pairs in declaration order.
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, Vec<f64>)>) -> Result<Self> {
        let mut algorithms = Vec::new();
        let mut times = Vec::new();
        let mut seen = HashSet::new();
        for (name, t) in entries {
            let id = AlgorithmId::new(name)?;
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateAlgorithm(id.0));
            }
            algorithms.push(id);
            times.push(t);
        }
        Self::from_parts(algorithms, times)
    }

    pub fn from_parts(algorithms: Vec<AlgorithmId>, times: Vec<Vec<f64>>) -> Result<Self> {
        if algorithms.is_empty() {
            return Err(Error::EmptyDataset);
        }
        assert_eq!(algorithms.len(), times.len(), "one measurement vector per algorithm");
        let mut seen = HashSet::new();
        for id in &algorithms {
            if !seen.insert(id) {
                return Err(Error::DuplicateAlgorithm(id.0.clone()));
            }
        }
        let expected = times[0].len();
        for (id, t) in algorithms.iter().zip(&times) {
            if t.is_empty() {
                return Err(Error::NoMeasurements(id.0.clone()));
            }
            if t.len() != expected {
                return Err(Error::InconsistentN {
                    name: id.0.clone(),
                    got: t.len(),
                    expected,
                });
            }
            if let Some((run, &value)) = t.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::InvalidMeasurement {
                    name: id.0.clone(),
                    run,
                    value,
                });
            }
        }
        Ok(Self { algorithms, times })
    }

    /// Number of algorithms, `p`.
    pub fn len(&self) -> usize {
        self.algorithms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algorithms.is_empty()
    }

    /// Measurements per algorithm, `N`.
    pub fn n(&self) -> usize {
        self.times[0].len()
    }

    pub fn algorithms(&self) -> &[AlgorithmId] {
        &self.algorithms
    }

    pub fn times(&self, index: usize) -> &[f64] {
        &self.times[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a.as_str() == name)
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|i| self.times(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AlgorithmId, &[f64])> {
        self.algorithms.iter().zip(self.times.iter().map(Vec::as_slice))
    }
}

/// Summary statistic applied to each bootstrap subsample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    #[default]
    Min,
    /// Lower median for even-sized samples.
    Median,
    Mean,
}

impl Statistic {
    /// Evaluates the statistic over `values[indices]`.
    pub fn of_indexed(self, values: &[f64], indices: impl Iterator<Item = usize>) -> f64 {
        match self {
            Statistic::Min => indices.map(|i| values[i]).fold(f64::INFINITY, f64::min),
            Statistic::Mean => {
                let (sum, count) = indices.fold((0.0, 0usize), |(s, c), i| (s + values[i], c + 1));
                sum / count as f64
            }
            Statistic::Median => {
                let mut picked: Vec<f64> = indices.map(|i| values[i]).collect();
                let mid = (picked.len() - 1) / 2;
                let (_, m, _) = picked.select_nth_unstable_by(mid, f64::total_cmp);
                *m
            }
        }
    }

    pub fn of(self, values: &[f64]) -> f64 {
        self.of_indexed(values, 0..values.len())
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" | "minimum" => Ok(Statistic::Min),
            "median" => Ok(Statistic::Median),
            "mean" => Ok(Statistic::Mean),
            other => Err(Error::InvalidParams(format!("unknown statistic `{other}`"))),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Min => "min",
            Statistic::Median => "median",
            Statistic::Mean => "mean",
        })
    }
}

/// Bootstrap subsample size `K`: fixed, or drawn uniformly from `lo..=hi`
/// once per comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleSize {
    Fixed(usize),
    Range { lo: usize, hi: usize },
}

impl SampleSize {
    pub fn min(self) -> usize {
        match self {
            SampleSize::Fixed(k) => k,
            SampleSize::Range { lo, .. } => lo,
        }
    }

    pub fn max(self) -> usize {
        match self {
            SampleSize::Fixed(k) => k,
            SampleSize::Range { hi, .. } => hi,
        }
    }

    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> usize {
        match self {
            SampleSize::Fixed(k) => k,
            SampleSize::Range { lo, hi } => rng.random_range(lo..=hi),
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            SampleSize::Fixed(0) => Err(Error::InvalidParams("K must be at least 1".into())),
            SampleSize::Range { lo, hi } if lo == 0 || lo > hi => {
                Err(Error::InvalidParams(format!("invalid K range {lo}-{hi}")))
            }
            _ => Ok(()),
        }
    }

    /// Fails with "K exceeds N" when any admissible K is larger than `n`.
    pub fn check_against(self, n: usize) -> Result<()> {
        if self.max() > n {
            return Err(Error::KExceedsN { k: self.max(), n });
        }
        Ok(())
    }
}

impl FromStr for SampleSize {
    type Err = Error;
    /// Accepts `10` or an inclusive range `5-10`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("invalid K `{s}`, expected `K` or `LO-HI`"));
        let size = match s.split_once('-') {
            Some((lo, hi)) => SampleSize::Range {
                lo: lo.trim().parse().map_err(|_| bad())?,
                hi: hi.trim().parse().map_err(|_| bad())?,
            },
            None => SampleSize::Fixed(s.trim().parse().map_err(|_| bad())?),
        };
        size.validate()?;
        Ok(size)
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Fixed(k) => write!(f, "{k}"),
            SampleSize::Range { lo, hi } => write!(f, "{lo}-{hi}"),
        }
    }
}

/// Tuning knobs for comparison, sorting and scoring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    /// In `[0.5, 1]`; higher widens the equivalence band.
    pub threshold: f64,
    /// Bootstrap iterations per comparison (`M`).
    pub m_iters: usize,
    /// Subsample size (`K`).
    pub sample_k: SampleSize,
    /// Repetitions of the ranking procedure (`Rep`).
    pub rep_count: usize,
    pub statistic: Statistic,
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            threshold: 0.9,
            m_iters: 30,
            sample_k: SampleSize::Fixed(10),
            rep_count: 50,
            statistic: Statistic::Min,
            seed: 0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidParams(format!(
                "threshold {} outside [0.5, 1]",
                self.threshold
            )));
        }
        if self.m_iters == 0 {
            return Err(Error::InvalidParams("M must be at least 1".into()));
        }
        if self.rep_count == 0 {
            return Err(Error::InvalidParams("Rep must be at least 1".into()));
        }
        self.sample_k.validate()
    }

    pub fn validate_for(&self, dataset: &TimingDataset) -> Result<()> {
        self.validate()?;
        self.sample_k.check_against(dataset.n())
    }
}

/// Three-way verdict of the first argument measured against the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Faster,
    Equivalent,
    Slower,
}

impl Verdict {
    /// The verdict with the arguments exchanged.
    pub fn flip(self) -> Self {
        match self {
            Verdict::Faster => Verdict::Slower,
            Verdict::Equivalent => Verdict::Equivalent,
            Verdict::Slower => Verdict::Faster,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Faster => "Faster",
            Verdict::Equivalent => "Equivalent",
            Verdict::Slower => "Slower",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub verdict: Verdict,
    /// Fraction `c / M` of bootstrap iterations where the first statistic was `<=` the second.
    pub empirical_prob: f64,
}

impl ComparisonOutcome {
    /// Applies the threshold band to an empirical probability.
    pub fn from_probability(empirical_prob: f64, threshold: f64) -> Self {
        let verdict = if empirical_prob >= threshold {
            Verdict::Faster
        } else if empirical_prob < 1.0 - threshold {
            Verdict::Slower
        } else {
            Verdict::Equivalent
        };
        Self {
            verdict,
            empirical_prob,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub algorithm: AlgorithmId,
    pub rank: usize,
}

/// Algorithms ordered best-first, with ranks shared inside a performance class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedSequence {
    pub entries: Vec<RankEntry>,
}

impl RankedSequence {
    /// Number of performance classes, `w`.
    pub fn class_count(&self) -> usize {
        self.entries.last().map_or(0, |e| e.rank)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.rank).collect()
    }

    /// Members of the best class.
    pub fn fastest(&self) -> impl Iterator<Item = &AlgorithmId> {
        self.entries.iter().filter(|e| e.rank == 1).map(|e| &e.algorithm)
    }

    /// Checks ranks are non-decreasing and cover `1..=w` without gaps.
    pub fn ranks_are_contiguous(&self) -> bool {
        let mut prev = 1;
        for (i, e) in self.entries.iter().enumerate() {
            let ok = if i == 0 {
                e.rank == 1
            } else {
                e.rank == prev || e.rank == prev + 1
            };
            if !ok {
                return false;
            }
            prev = e.rank;
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMethod {
    /// Argmin of subsample minima, no equivalence classes.
    Baseline,
    /// Rank-1 frequency across repeated three-way sorts.
    Sorted,
}

impl FromStr for ScoreMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(ScoreMethod::Baseline),
            "sorted" => Ok(ScoreMethod::Sorted),
            other => Err(Error::InvalidParams(format!("unknown method `{other}`"))),
        }
    }
}

/// Relative scores and the resulting fastest set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub method: ScoreMethod,
    pub params: HyperParams,
    /// Every algorithm in declaration order; non-members of the fastest set score 0.
    pub scores: IndexMap<AlgorithmId, f64>,
    pub fastest_set: Vec<AlgorithmId>,
    /// Rank-1 algorithms of each repetition, in repetition order.
    pub winners: Vec<Vec<AlgorithmId>>,
}

impl ScoreReport {
    pub(crate) fn from_winners(
        method: ScoreMethod,
        params: HyperParams,
        algorithms: &[AlgorithmId],
        winners: Vec<Vec<AlgorithmId>>,
    ) -> Self {
        let mut counts: IndexMap<AlgorithmId, usize> = algorithms.iter().map(|a| (a.clone(), 0)).collect();
        for round in &winners {
            for w in round {
                *counts.get_mut(w).expect("winner belongs to the dataset") += 1;
            }
        }
        let rep = params.rep_count as f64;
        let scores: IndexMap<AlgorithmId, f64> = counts.iter().map(|(a, &c)| (a.clone(), c as f64 / rep)).collect();
        let fastest_set = counts.iter().filter(|(_, &c)| c > 0).map(|(a, _)| a.clone()).collect();
        Self {
            method,
            params,
            scores,
            fastest_set,
            winners,
        }
    }

    pub fn score(&self, name: &str) -> Option<f64> {
        self.scores.iter().find(|(a, _)| a.as_str() == name).map(|(_, &s)| s)
    }
}
