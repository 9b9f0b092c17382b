//! Fixtures shared by the criterion benches.

use perfclass::synth::{generate, DistributionSpec};
use perfclass::TimingDataset;

/// `p` overlapping lognormal variants with `n` measurements each.
pub fn fixture(p: usize, n: usize, seed: u64) -> TimingDataset {
    let specs: Vec<DistributionSpec> = (0..p)
        .map(|j| {
            let location = 1e-3 * (1.0 + 0.02 * j as f64);
            DistributionSpec::lognormal(format!("alg{j}"), location, 3e-4, 0.6, n, seed + j as u64)
        })
        .collect();
    generate(&specs).expect("fixture specs are valid")
}
