use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::AlgorithmId;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlanSlot {
    /// Index into [`MeasurementPlan::algorithms`].
    pub algorithm: usize,
    pub repetition: usize,
}

/// Interleaved execution order for `p·n` timed runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub algorithms: Vec<AlgorithmId>,
    pub slots: Vec<PlanSlot>,
}

impl MeasurementPlan {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AlgorithmId, usize)> {
        self.slots.iter().map(|s| (&self.algorithms[s.algorithm], s.repetition))
    }
}

/// Shuffles the concatenation `e_1 ⊕ … ⊕ e_p` of every algorithm's `n`
/// repetitions with a seeded Fisher–Yates pass.
pub fn build_plan(algorithms: &[AlgorithmId], n: usize, seed: u64) -> Result<MeasurementPlan> {
    if algorithms.is_empty() || n == 0 {
        return Err(Error::EmptyPlan);
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = algorithms.iter().find(|a| !seen.insert(*a)) {
        return Err(Error::DuplicateAlgorithm(dup.to_string()));
    }
    let mut slots: Vec<PlanSlot> = (0..algorithms.len())
        .flat_map(|algorithm| (0..n).map(move |repetition| PlanSlot { algorithm, repetition }))
        .collect();
    slots.shuffle(&mut stream_rng(seed));
    Ok(MeasurementPlan {
        algorithms: algorithms.to_vec(),
        slots,
    })
}
