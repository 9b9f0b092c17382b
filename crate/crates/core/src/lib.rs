//! Performance equivalence classes for mathematically equivalent algorithms.
//!
//! Given repeated execution-time measurements of several algorithm variants,
//! this crate sorts them into performance classes with a bootstrap three-way
//! comparison and a rank-merging bubble sort, then scores how often each
//! variant lands in the fastest class. Variants with a positive score form the
//! fastest set.
//!
//! ```
//! use perfclass::{score_sorted, HyperParams, SampleSize, TimingDataset};
//!
//! let data = TimingDataset::new([
//!     ("blocked", vec![1.02e-3, 1.10e-3, 1.05e-3, 1.31e-3, 1.07e-3, 1.12e-3]),
//!     ("naive", vec![2.40e-3, 2.51e-3, 2.38e-3, 2.77e-3, 2.45e-3, 2.60e-3]),
//! ])?;
//! let params = HyperParams { sample_k: SampleSize::Fixed(3), ..Default::default() };
//! let report = score_sorted(&data, &params)?;
//! assert_eq!(report.fastest_set[0].as_str(), "blocked");
//! # Ok::<(), perfclass::Error>(())
//! ```

pub mod comparator;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod model;
pub mod rng;
pub mod scorer;
pub mod sorter;
pub mod synth;

pub use comparator::{compare, exact_probability, CompareConfig};
pub use error::{Error, Result};
pub use evaluator::{precision_recall, sweep, sweep_suite, truncate, PrecisionRecall, SweepRow};
pub use harness::{run_manifest, Manifest, ManifestEntry, MeasurementRun};
pub use model::{
    build_plan, load_dataset, save_dataset, AlgorithmId, ComparisonOutcome, DatasetFormat, HyperParams,
    MeasurementPlan, RankEntry, RankedSequence, SampleSize, ScoreMethod, ScoreReport, Statistic, TimingDataset,
    Verdict,
};
pub use scorer::{score_baseline, score_sorted, score_sorted_with};
pub use sorter::{sort_algorithms, sort_dataset, sort_indices, BootstrapComparer, Comparer, SortOutcome};
pub use synth::{generate, DistributionSpec};
