//! Three-way bootstrap comparison of two timing distributions.
//!
//! Each of the `M` iterations draws `K` measurements without replacement from
//! both vectors, reduces each draw with the configured statistic and counts
//! how often the first value is `<=` the second. The fraction `c/M` is then
//! placed against the threshold band `[1 - threshold, threshold)`.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::model::{ComparisonOutcome, HyperParams, SampleSize, Statistic};
use crate::rng::{derive_seed, stream_rng};

/// Upper bound on subset pairs [`exact_probability`] will enumerate.
pub const ORACLE_BUDGET: u128 = 10_000_000;

/// Stream index reserved for drawing K from a range.
const K_DRAW_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareConfig {
    pub threshold: f64,
    pub m_iters: usize,
    pub sample_k: SampleSize,
    pub statistic: Statistic,
    pub seed: u64,
}

impl CompareConfig {
    pub fn from_params(params: &HyperParams) -> Self {
        Self {
            threshold: params.threshold,
            m_iters: params.m_iters,
            sample_k: params.sample_k,
            statistic: params.statistic,
            seed: params.seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        HyperParams {
            threshold: self.threshold,
            m_iters: self.m_iters,
            sample_k: self.sample_k,
            rep_count: 1,
            statistic: self.statistic,
            seed: self.seed,
        }
        .validate()
    }
}

/// Compares `t_i` against `t_j`; the verdict reads "`t_i` is Faster/Equivalent/Slower".
pub fn compare(t_i: &[f64], t_j: &[f64], cfg: &CompareConfig) -> Result<ComparisonOutcome> {
    cfg.validate()?;
    cfg.sample_k.check_against(t_i.len().min(t_j.len()))?;
    Ok(compare_unchecked(t_i, t_j, cfg))
}

/// [`compare`] without validation; callers guarantee `K <= min(N_i, N_j)`.
pub(crate) fn compare_unchecked(t_i: &[f64], t_j: &[f64], cfg: &CompareConfig) -> ComparisonOutcome {
    let k = match cfg.sample_k {
        SampleSize::Fixed(k) => k,
        range => range.draw(&mut stream_rng(derive_seed(cfg.seed, K_DRAW_STREAM))),
    };
    let mut c = 0usize;
    for m in 0..cfg.m_iters {
        // Each iteration owns its stream so the loop could be split without changing c.
        let mut rng = stream_rng(derive_seed(cfg.seed, m as u64));
        let e_i = cfg
            .statistic
            .of_indexed(t_i, index::sample(&mut rng, t_i.len(), k).into_iter());
        let e_j = cfg
            .statistic
            .of_indexed(t_j, index::sample(&mut rng, t_j.len(), k).into_iter());
        if e_i <= e_j {
            c += 1;
        }
    }
    ComparisonOutcome::from_probability(c as f64 / cfg.m_iters as f64, cfg.threshold)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Statistic of every `k`-subset of `values`, in lexicographic subset order.
fn subset_statistics(values: &[f64], k: usize, statistic: Statistic) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(statistic.of_indexed(values, idx.iter().copied()));
        // advance to the next combination
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Exact `P[e_i <= e_j]` over all pairs of `k`-subsets drawn without replacement.
pub fn exact_probability(t_i: &[f64], t_j: &[f64], k: usize, statistic: Statistic) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("K must be at least 1".into()));
    }
    let n = t_i.len().min(t_j.len());
    if k > n {
        return Err(Error::KExceedsN { k, n });
    }
    let pairs = binomial(t_i.len(), k).saturating_mul(binomial(t_j.len(), k));
    if pairs > ORACLE_BUDGET {
        return Err(Error::OracleTooLarge {
            pairs,
            budget: ORACLE_BUDGET,
        });
    }
    let e_i = subset_statistics(t_i, k, statistic);
    let e_j = subset_statistics(t_j, k, statistic);
    let hits: usize = e_i.iter().map(|a| e_j.iter().filter(|&&b| *a <= b).count()).sum();
    Ok(hits as f64 / (e_i.len() * e_j.len()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Verdict;
    use proptest::prelude::*;

    fn cfg(threshold: f64, m_iters: usize, k: usize, seed: u64) -> CompareConfig {
        CompareConfig {
            threshold,
            m_iters,
            sample_k: SampleSize::Fixed(k),
            statistic: Statistic::Min,
            seed,
        }
    }

    #[test]
    fn separated_constants() {
        let fast = [1e-3; 3];
        let slow = [2e-3; 3];
        for k in 1..=3 {
            for thr in [0.5, 0.8, 0.99, 1.0] {
                let o = compare(&fast, &slow, &cfg(thr, 17, k, 3)).unwrap();
                assert_eq!((o.verdict, o.empirical_prob), (Verdict::Faster, 1.0));
                let o = compare(&slow, &fast, &cfg(thr, 17, k, 3)).unwrap();
                // At threshold 1 the Slower band `c/M < 0` is empty.
                let expected = if thr < 1.0 {
                    Verdict::Slower
                } else {
                    Verdict::Equivalent
                };
                assert_eq!((o.verdict, o.empirical_prob), (expected, 0.0));
            }
        }
    }

    #[test]
    fn interleaved_pair_is_equivalent() {
        // 2x2 enumeration: (1,2) (1,3) hold, (4,2) (4,3) do not -> 0.5
        let o = compare(&[1.0, 4.0], &[2.0, 3.0], &cfg(0.8, 10_000, 1, 42)).unwrap();
        assert_eq!(o.verdict, Verdict::Equivalent);
        assert!((o.empirical_prob - 0.5).abs() <= 0.05, "{}", o.empirical_prob);
    }

    #[test]
    fn identical_constants_favor_first_argument() {
        let t = [5.0; 4];
        let o = compare(&t, &t, &cfg(0.95, 100, 2, 0)).unwrap();
        assert_eq!((o.verdict, o.empirical_prob), (Verdict::Faster, 1.0));
    }

    #[test]
    fn k_exceeds_n() {
        let err = compare(&[1.0, 2.0], &[1.0, 2.0, 3.0], &cfg(0.9, 5, 3, 0)).unwrap_err();
        assert!(err.to_string().starts_with("K exceeds N"));
    }

    #[test]
    fn exact_values() {
        assert_eq!(
            exact_probability(&[1.0, 4.0], &[2.0, 3.0], 1, Statistic::Min).unwrap(),
            0.5
        );
        assert_eq!(
            exact_probability(&[1.0, 2.0], &[1.0, 2.0], 1, Statistic::Min).unwrap(),
            0.75
        );
        let t = [3.0, 1.0, 2.0];
        assert_eq!(exact_probability(&t, &t, 3, Statistic::Min).unwrap(), 1.0);
    }

    #[test]
    fn exact_budget() {
        let big: Vec<f64> = (1..=40).map(f64::from).collect();
        assert!(matches!(
            exact_probability(&big, &big, 10, Statistic::Min),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn subsets_enumerated_once() {
        let stats = subset_statistics(&[1.0, 2.0, 3.0, 4.0, 5.0], 2, Statistic::Mean);
        assert_eq!(stats.len(), 10);
        assert_eq!(stats[0], 1.5);
        assert_eq!(stats[9], 4.5);
        assert_eq!(binomial(50, 10), 10_272_278_170);
    }

    #[test]
    fn k_range_draw_is_seeded() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let b = [1.5, 2.5, 3.5, 4.5, 5.5, 6.5];
        let c = CompareConfig {
            sample_k: SampleSize::Range { lo: 2, hi: 5 },
            ..cfg(0.9, 200, 1, 9)
        };
        assert_eq!(compare(&a, &b, &c).unwrap(), compare(&a, &b, &c).unwrap());
        let too_big = CompareConfig {
            sample_k: SampleSize::Range { lo: 2, hi: 7 },
            ..c
        };
        assert!(compare(&a, &b, &too_big).is_err());
    }

    #[test]
    fn median_statistic_matches_oracle() {
        let a = [1.0, 5.0, 2.0, 8.0, 3.0];
        let b = [2.0, 4.0, 6.0, 1.0, 7.0];
        let exact = exact_probability(&a, &b, 3, Statistic::Median).unwrap();
        let c = CompareConfig {
            statistic: Statistic::Median,
            ..cfg(0.9, 20_000, 3, 1)
        };
        let o = compare(&a, &b, &c).unwrap();
        assert!(
            (o.empirical_prob - exact).abs() < 0.02,
            "{} vs {exact}",
            o.empirical_prob
        );
    }

    proptest! {
        #[test]
        fn verdict_matches_probability_band(
            a in prop::collection::vec(1.0f64..10.0, 2..8),
            b in prop::collection::vec(1.0f64..10.0, 2..8),
            thr in 0.5f64..=1.0,
            m in 1usize..50,
            seed: u64,
        ) {
            let o = compare(&a, &b, &cfg(thr, m, 2, seed)).unwrap();
            prop_assert_eq!(o, ComparisonOutcome::from_probability(o.empirical_prob, thr));
            prop_assert_eq!(o, compare(&a, &b, &cfg(thr, m, 2, seed)).unwrap());
            prop_assert!((0.0..=1.0).contains(&o.empirical_prob));
        }
    }
}
