//! How stable is the fastest set when fewer measurements are available?
//!
//! The reference set is the fastest set at the full `N`; candidates are the
//! fastest sets of seeded truncations to `n < N`.

use std::collections::HashSet;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AlgorithmId, HyperParams, TimingDataset};
use crate::rng::{derive_seed, stream_rng};
use crate::scorer::score_sorted;

/// Keeps `n` measurements per algorithm, drawn without replacement and kept in
/// their original order. `n == N` returns the dataset unchanged.
pub fn truncate(dataset: &TimingDataset, n: usize, seed: u64) -> Result<TimingDataset> {
    let full = dataset.n();
    if n == 0 || n > full {
        return Err(Error::NOutOfRange { n, max: full });
    }
    if n == full {
        return Ok(dataset.clone());
    }
    let times = dataset
        .iter()
        .enumerate()
        .map(|(j, (_, t))| {
            let mut rng = stream_rng(derive_seed(seed, j as u64));
            let mut picked = index::sample(&mut rng, full, n).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| t[i]).collect()
        })
        .collect();
    TimingDataset::from_parts(dataset.algorithms().to_vec(), times)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
}

/// Precision and recall of `candidate` against `reference`. An empty candidate
/// has precision 0.
pub fn precision_recall<'a, C, R>(candidate: C, reference: R) -> Result<PrecisionRecall>
where
    C: IntoIterator<Item = &'a AlgorithmId>,
    R: IntoIterator<Item = &'a AlgorithmId>,
{
    let candidate: HashSet<&AlgorithmId> = candidate.into_iter().collect();
    let reference: HashSet<&AlgorithmId> = reference.into_iter().collect();
    if reference.is_empty() {
        return Err(Error::UndefinedRecall);
    }
    let tp = candidate.intersection(&reference).count() as f64;
    let precision = if candidate.is_empty() {
        0.0
    } else {
        tp / candidate.len() as f64
    };
    Ok(PrecisionRecall {
        precision,
        recall: tp / reference.len() as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub precision: f64,
    pub recall: f64,
}

/// Mean precision/recall of the fastest set at each truncated size.
///
/// Trial `t` at size `n` truncates with `derive_seed(seed, n·2^32 + t)` and
/// scores with `params` unchanged, so `n == N` reproduces the reference.
pub fn sweep(
    dataset: &TimingDataset,
    params: &HyperParams,
    n_values: &[usize],
    trials: usize,
) -> Result<Vec<SweepRow>> {
    sweep_suite(std::slice::from_ref(dataset), params, n_values, trials)
}

/// [`sweep`] averaged without weights over several independent problems.
pub fn sweep_suite(
    problems: &[TimingDataset],
    params: &HyperParams,
    n_values: &[usize],
    trials: usize,
) -> Result<Vec<SweepRow>> {
    if problems.is_empty() || trials == 0 {
        return Err(Error::InvalidParams(
            "sweep needs at least one problem and one trial".into(),
        ));
    }
    params.validate()?;
    for d in problems {
        for &n in n_values {
            if n == 0 || n > d.n() {
                return Err(Error::NOutOfRange { n, max: d.n() });
            }
            params.sample_k.check_against(n)?;
        }
    }

    let references: Vec<Vec<AlgorithmId>> = problems
        .par_iter()
        .map(|d| score_sorted(d, params).map(|r| r.fastest_set))
        .collect::<Result<_>>()?;

    n_values
        .iter()
        .map(|&n| {
            let jobs: Vec<(usize, usize)> = (0..problems.len())
                .flat_map(|p| (0..trials).map(move |t| (p, t)))
                .collect();
            let per_problem: Vec<PrecisionRecall> = jobs
                .par_iter()
                .map(|&(p, t)| {
                    let stream = ((n as u64) << 32) | t as u64;
                    let reduced = truncate(&problems[p], n, derive_seed(params.seed, stream))?;
                    let candidate = score_sorted(&reduced, params)?.fastest_set;
                    precision_recall(&candidate, &references[p])
                })
                .collect::<Result<_>>()?;
            let count = per_problem.len() as f64;
            Ok(SweepRow {
                n,
                precision: per_problem.iter().map(|r| r.precision).sum::<f64>() / count,
                recall: per_problem.iter().map(|r| r.recall).sum::<f64>() / count,
            })
        })
        .collect()
}

/// CSV rendering `n,precision,recall`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,precision,recall\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.precision, r.recall));
    }
    out
}
