//! Bubble sort with three-way comparisons and rank merging.
//!
//! The sequence starts as `<(alg_0, 1), …, (alg_{p-1}, p)>`. Pass `i` compares
//! adjacent positions `j` and `j + 1` for `j < p - i`. Ranks live on positions,
//! not on algorithms: a plain swap therefore exchanges the ranks of the two
//! algorithms, and the rank updates below only ever touch positions after `j`.
//!
//! | verdict of `s[j]` vs `s[j+1]` | ranks at `j`, `j+1` | predecessor `j-1`   | action                              |
//! |-------------------------------|---------------------|---------------------|-------------------------------------|
//! | Slower                        | differ              | differs, or `j = 0` | swap ([`Rule::Exchange`])           |
//! | Slower                        | differ              | shares rank of `j`  | swap, decrement ([`Rule::SwapMerge`]) |
//! | Slower                        | equal               | differs, or `j = 0` | swap, increment ([`Rule::Promote`]) |
//! | Slower                        | equal               | shares rank of `j`  | swap ([`Rule::SwapWithinClass`])    |
//! | Equivalent                    | differ              | any                 | decrement ([`Rule::Merge`])         |
//! | Equivalent                    | equal               | any                 | nothing ([`Rule::AlreadyMerged`])   |
//! | Faster                        | any                 | any                 | nothing ([`Rule::Keep`])            |

use std::fmt;

use crate::comparator::{compare_unchecked, CompareConfig};
use crate::error::Result;
use crate::model::{AlgorithmId, HyperParams, RankEntry, RankedSequence, TimingDataset, Verdict};
use crate::rng::derive_seed;

/// Source of three-way verdicts between algorithms addressed by dataset index.
pub trait Comparer {
    /// Verdict of `first` measured against `second`.
    fn compare(&mut self, first: usize, second: usize) -> Verdict;
}

impl<F: FnMut(usize, usize) -> Verdict> Comparer for F {
    fn compare(&mut self, first: usize, second: usize) -> Verdict {
        self(first, second)
    }
}

/// Bootstrap comparisons over a dataset; every call re-samples with a fresh
/// stream derived from the base seed and the call counter.
#[derive(Debug)]
pub struct BootstrapComparer<'a> {
    dataset: &'a TimingDataset,
    cfg: CompareConfig,
    calls: u64,
}

impl<'a> BootstrapComparer<'a> {
    /// `params` must already be validated against `dataset`.
    pub fn new(dataset: &'a TimingDataset, params: &HyperParams) -> Self {
        Self {
            dataset,
            cfg: CompareConfig::from_params(params),
            calls: 0,
        }
    }
}

impl Comparer for BootstrapComparer<'_> {
    fn compare(&mut self, first: usize, second: usize) -> Verdict {
        let cfg = self.cfg.with_seed(derive_seed(self.cfg.seed, self.calls));
        self.calls += 1;
        compare_unchecked(self.dataset.times(first), self.dataset.times(second), &cfg).verdict
    }
}

/// Which rank update a comparison triggered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Exchange,
    SwapMerge,
    Promote,
    SwapWithinClass,
    Merge,
    AlreadyMerged,
    Keep,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Exchange => "exchange",
            Rule::SwapMerge => "swap-merge",
            Rule::Promote => "promote",
            Rule::SwapWithinClass => "swap-within-class",
            Rule::Merge => "merge",
            Rule::AlreadyMerged => "already-merged",
            Rule::Keep => "keep",
        })
    }
}

/// One adjacent comparison and the state right after its rank update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based pass number.
    pub pass: usize,
    /// 0-based position `j` of the left element.
    pub position: usize,
    pub first: usize,
    pub second: usize,
    pub verdict: Verdict,
    pub rule: Rule,
    pub order: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl TraceStep {
    /// Stable single-line rendering: `pass P pos J: A vs B -> VERDICT [rule] order=… ranks=…`.
    pub fn render(&self, names: &[AlgorithmId]) -> String {
        let order: Vec<&str> = self.order.iter().map(|&i| names[i].as_str()).collect();
        let ranks: Vec<String> = self.ranks.iter().map(usize::to_string).collect();
        format!(
            "pass {} pos {}: {} vs {} -> {} [{}] order={} ranks={}",
            self.pass,
            self.position,
            names[self.first],
            names[self.second],
            self.verdict,
            self.rule,
            order.join(","),
            ranks.join(",")
        )
    }
}

/// Final order (`s`), per-position ranks (`r`) and optional trace of a sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortOutcome {
    pub order: Vec<usize>,
    pub ranks: Vec<usize>,
    pub trace: Vec<TraceStep>,
}

impl SortOutcome {
    pub fn to_sequence(&self, names: &[AlgorithmId]) -> RankedSequence {
        RankedSequence {
            entries: self
                .order
                .iter()
                .zip(&self.ranks)
                .map(|(&i, &rank)| RankEntry {
                    algorithm: names[i].clone(),
                    rank,
                })
                .collect(),
        }
    }

    pub fn class_count(&self) -> usize {
        self.ranks.last().copied().unwrap_or(0)
    }
}

fn shift_after(ranks: &mut [usize], j: usize, up: bool) {
    for r in &mut ranks[j + 1..] {
        if up {
            *r += 1;
        } else {
            *r -= 1;
        }
    }
}

/// Sorts algorithms `0..p` into performance classes.
pub fn sort_indices<C: Comparer + ?Sized>(p: usize, comparer: &mut C, record_trace: bool) -> SortOutcome {
    let mut s: Vec<usize> = (0..p).collect();
    let mut r: Vec<usize> = (1..=p).collect();
    let mut trace = Vec::new();

    for pass in 1..=p {
        for j in 0..p - pass {
            let (first, second) = (s[j], s[j + 1]);
            let verdict = comparer.compare(first, second);
            let shares_with_prev = j != 0 && r[j - 1] == r[j];
            let rule = match verdict {
                Verdict::Slower => {
                    s.swap(j, j + 1);
                    match (r[j + 1] == r[j], shares_with_prev) {
                        // At j = 0 with equal ranks both readings of the guard
                        // lead here: the winner leaves its class and takes the
                        // front rank alone.
                        (true, false) => {
                            shift_after(&mut r, j, true);
                            Rule::Promote
                        }
                        (true, true) => Rule::SwapWithinClass,
                        (false, true) => {
                            shift_after(&mut r, j, false);
                            Rule::SwapMerge
                        }
                        (false, false) => Rule::Exchange,
                    }
                }
                Verdict::Equivalent if r[j + 1] != r[j] => {
                    shift_after(&mut r, j, false);
                    Rule::Merge
                }
                Verdict::Equivalent => Rule::AlreadyMerged,
                Verdict::Faster => Rule::Keep,
            };
            if record_trace {
                trace.push(TraceStep {
                    pass,
                    position: j,
                    first,
                    second,
                    verdict,
                    rule,
                    order: s.clone(),
                    ranks: r.clone(),
                });
            }
        }
    }

    debug_assert!(contiguous(&r), "rank updates broke contiguity: {r:?}");
    renumber(&mut r);
    SortOutcome {
        order: s,
        ranks: r,
        trace,
    }
}

fn contiguous(ranks: &[usize]) -> bool {
    ranks.first().is_none_or(|&r| r == 1) && ranks.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

fn renumber(ranks: &mut [usize]) {
    let mut class = 0;
    let mut prev = None;
    for r in ranks.iter_mut() {
        if prev != Some(*r) {
            class += 1;
            prev = Some(*r);
        }
        *r = class;
    }
}

/// Ranks the dataset's algorithms using verdicts from `comparer`.
pub fn sort_algorithms<C: Comparer + ?Sized>(dataset: &TimingDataset, comparer: &mut C) -> RankedSequence {
    sort_indices(dataset.len(), comparer, false).to_sequence(dataset.algorithms())
}

/// Ranks the dataset with bootstrap comparisons seeded from `params.seed`.
pub fn sort_dataset(dataset: &TimingDataset, params: &HyperParams) -> Result<RankedSequence> {
    params.validate_for(dataset)?;
    Ok(sort_algorithms(dataset, &mut BootstrapComparer::new(dataset, params)))
}

/// Like [`sort_dataset`] but keeps the full comparison trace.
pub fn sort_dataset_traced(dataset: &TimingDataset, params: &HyperParams) -> Result<SortOutcome> {
    params.validate_for(dataset)?;
    Ok(sort_indices(
        dataset.len(),
        &mut BootstrapComparer::new(dataset, params),
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_algorithm() {
        let d = TimingDataset::new([("only", vec![1.0, 2.0])]).unwrap();
        let seq = sort_dataset(
            &d,
            &HyperParams {
                sample_k: crate::SampleSize::Fixed(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq.entries.len(), 1);
        assert_eq!(seq.entries[0].rank, 1);
    }

    #[test]
    fn all_equivalent_keeps_order() {
        let out = sort_indices(5, &mut |_, _| Verdict::Equivalent, true);
        assert_eq!(out.order, vec![0, 1, 2, 3, 4]);
        assert_eq!(out.ranks, vec![1; 5]);
    }

    #[test]
    fn strict_order_is_plain_bubble_sort() {
        let keys = [3, 0, 4, 1, 2];
        let out = sort_indices(
            5,
            &mut |a: usize, b: usize| {
                if keys[a] < keys[b] {
                    Verdict::Faster
                } else {
                    Verdict::Slower
                }
            },
            false,
        );
        assert_eq!(out.order, vec![1, 3, 4, 0, 2]);
        assert_eq!(out.ranks, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn promote_at_front() {
        let mut calls = 0;
        let mut cmp = |_: usize, _: usize| {
            calls += 1;
            if calls == 1 {
                Verdict::Equivalent
            } else {
                Verdict::Slower
            }
        };
        let out = sort_indices(3, &mut cmp, true);
        // pass 1: pos0 merge (1,1,2); pos1 Slower with unequal ranks, predecessor shares -> swap-merge (1,1,1)
        // pass 2: pos0 Slower, equal ranks, j = 0 -> promote (1,2,2)
        assert_eq!(
            out.trace.iter().map(|t| t.rule).collect::<Vec<_>>(),
            vec![Rule::Merge, Rule::SwapMerge, Rule::Promote]
        );
        assert_eq!(out.order, vec![2, 0, 1]);
        assert_eq!(out.ranks, vec![1, 2, 2]);
    }

    #[test]
    fn renumber_compacts() {
        let mut r = vec![1, 1, 3, 3, 7];
        renumber(&mut r);
        assert_eq!(r, vec![1, 1, 2, 2, 3]);
    }

    proptest! {
        #[test]
        fn random_verdicts_keep_invariants(p in 1usize..9, verdicts in prop::collection::vec(0u8..3, 64)) {
            let mut k = 0;
            let out = sort_indices(p, &mut |_, _| {
                let v = [Verdict::Faster, Verdict::Equivalent, Verdict::Slower][verdicts[k % 64] as usize];
                k += 1;
                v
            }, false);
            prop_assert!(contiguous(&out.ranks));
            let mut seen = out.order.clone();
            seen.sort();
            prop_assert_eq!(seen, (0..p).collect::<Vec<_>>());
        }
    }
}
