//! Relative scores and the fastest set.
//!
//! Both methods repeat a randomized ranking `rep_count` times and score each
//! algorithm by the fraction of repetitions in which it came out on top.
//! Repetition `i` is seeded with `derive_seed(seed, i)`, so parallel and
//! sequential execution produce identical reports.

use rand::seq::index;
use rayon::prelude::*;

use crate::error::Result;
use crate::model::{AlgorithmId, HyperParams, SampleSize, ScoreMethod, ScoreReport, Statistic, TimingDataset};
use crate::rng::{derive_seed, stream_rng};
use crate::sorter::{sort_indices, BootstrapComparer, Comparer};

/// Single-winner bootstrap: each repetition subsamples `K` values per
/// algorithm and awards the repetition to the smallest subsample minimum.
/// Ties go to the lowest declaration index. Scores sum to exactly 1.
pub fn score_baseline(
    dataset: &TimingDataset,
    rep_count: usize,
    sample_k: SampleSize,
    seed: u64,
) -> Result<ScoreReport> {
    let params = HyperParams {
        rep_count,
        sample_k,
        seed,
        statistic: Statistic::Min,
        ..HyperParams::default()
    };
    params.validate_for(dataset)?;

    let winners: Vec<Vec<AlgorithmId>> = (0..rep_count)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(derive_seed(seed, rep as u64));
            let mut best: Option<(usize, f64)> = None;
            for (j, (_, t)) in dataset.iter().enumerate() {
                let k = sample_k.draw(&mut rng);
                let e = Statistic::Min.of_indexed(t, index::sample(&mut rng, t.len(), k).into_iter());
                if best.is_none_or(|(_, b)| e < b) {
                    best = Some((j, e));
                }
            }
            let (winner, _) = best.expect("dataset is non-empty");
            vec![dataset.algorithms()[winner].clone()]
        })
        .collect();

    Ok(ScoreReport::from_winners(
        ScoreMethod::Baseline,
        params,
        dataset.algorithms(),
        winners,
    ))
}

/// Rank-1 frequency over `rep_count` independent three-way sorts.
pub fn score_sorted(dataset: &TimingDataset, params: &HyperParams) -> Result<ScoreReport> {
    params.validate_for(dataset)?;
    Ok(score_sorted_with(dataset.algorithms(), params, |_, seed| {
        BootstrapComparer::new(dataset, &HyperParams { seed, ..*params })
    }))
}

/// [`score_sorted`] over an arbitrary comparer; `make_comparer(rep, seed)`
/// builds the comparer of repetition `rep`.
pub fn score_sorted_with<F, C>(algorithms: &[AlgorithmId], params: &HyperParams, make_comparer: F) -> ScoreReport
where
    F: Fn(usize, u64) -> C + Sync,
    C: Comparer,
{
    let winners: Vec<Vec<AlgorithmId>> = (0..params.rep_count)
        .into_par_iter()
        .map(|rep| {
            let mut comparer = make_comparer(rep, derive_seed(params.seed, rep as u64));
            let out = sort_indices(algorithms.len(), &mut comparer, false);
            out.order
                .iter()
                .zip(&out.ranks)
                .filter(|(_, &r)| r == 1)
                .map(|(&i, _)| algorithms[i].clone())
                .collect()
        })
        .collect();
    ScoreReport::from_winners(ScoreMethod::Sorted, *params, algorithms, winners)
}
