//! Runs external commands under a shuffled, strictly sequential plan and
//! records spawn-to-exit wall-clock time.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::model::{build_plan, AlgorithmId, TimingDataset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    /// Program followed by its arguments.
    pub cmd: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cwd: Option<PathBuf>,
    /// Untimed runs executed before the plan starts.
    #[serde(default)]
    pub warmup: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Timed repetitions per entry.
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Reads a manifest; relative `cwd` entries are resolved against the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut manifest: Manifest =
            serde_json::from_reader(BufReader::new(File::open(path).map_err(Error::file(path))?)).map_err(|e| {
                Error::Parse {
                    path: path.to_path_buf(),
                    reason: e.to_string(),
                }
            })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for entry in &mut manifest.entries {
            if let Some(cwd) = &entry.cwd {
                if cwd.is_relative() {
                    entry.cwd = Some(base.join(cwd));
                }
            }
        }
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.entries.is_empty() {
            return Err(Error::EmptyPlan);
        }
        for e in &self.entries {
            AlgorithmId::new(e.name.as_str())?;
            if e.cmd.first().is_none_or(|c| c.is_empty()) {
                return Err(Error::InvalidParams(format!("entry `{}` has an empty command", e.name)));
            }
        }
        Ok(())
    }
}

/// One executed slot of the plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub slot: usize,
    pub algorithm: String,
    pub repetition: usize,
    /// Seconds from the start of the plan to the spawn of this run.
    pub start: f64,
    pub seconds: f64,
    pub exit_code: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRun {
    pub dataset: TimingDataset,
    pub audit: Vec<AuditRecord>,
}

/// Why a measurement run stopped early, with everything recorded so far.
#[derive(Clone, Debug, Error, Serialize, Deserialize)]
#[error("`{algorithm}` (repetition {repetition}) exited with {status}; {completed} of {planned} timed runs completed")]
pub struct RunFailure {
    pub algorithm: String,
    pub repetition: usize,
    pub status: String,
    pub completed: usize,
    pub planned: usize,
    /// Completed timings per algorithm, in repetition order (may be ragged).
    pub partial: IndexMap<String, Vec<f64>>,
    pub audit: Vec<AuditRecord>,
}

/// Smallest observable step of the monotonic clock.
pub fn timer_resolution() -> Duration {
    let mut best = Duration::MAX;
    for _ in 0..64 {
        let start = Instant::now();
        let mut now = Instant::now();
        while now == start {
            now = Instant::now();
        }
        best = best.min(now - start);
    }
    best
}

fn command_for(entry: &ManifestEntry) -> Command {
    let mut cmd = Command::new(&entry.cmd[0]);
    cmd.args(&entry.cmd[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    if let Some(dir) = &entry.cwd {
        cmd.current_dir(dir);
    }
    cmd
}

fn spawn_error(entry: &ManifestEntry, source: std::io::Error) -> Error {
    Error::Spawn {
        name: entry.name.clone(),
        source,
    }
}

/// Executes the manifest and returns one timing vector per entry.
pub fn run_manifest(manifest: &Manifest) -> Result<MeasurementRun> {
    manifest.validate()?;
    let ids = manifest
        .entries
        .iter()
        .map(|e| AlgorithmId::new(e.name.as_str()))
        .collect::<Result<Vec<_>>>()?;
    let plan = build_plan(&ids, manifest.n, manifest.seed)?;

    for entry in &manifest.entries {
        for _ in 0..entry.warmup {
            command_for(entry).status().map_err(|e| spawn_error(entry, e))?;
        }
    }

    let mut times: Vec<Vec<Option<f64>>> = vec![vec![None; manifest.n]; ids.len()];
    let mut audit = Vec::with_capacity(plan.len());
    let origin = Instant::now();
    for (slot, s) in plan.slots.iter().enumerate() {
        let entry = &manifest.entries[s.algorithm];
        let mut cmd = command_for(entry);
        let start = Instant::now();
        let status = cmd.status().map_err(|e| spawn_error(entry, e))?;
        let elapsed = start.elapsed().as_secs_f64();
        audit.push(AuditRecord {
            slot,
            algorithm: entry.name.clone(),
            repetition: s.repetition,
            start: (start - origin).as_secs_f64(),
            seconds: elapsed,
            exit_code: status.code(),
        });
        if !status.success() {
            let partial = ids
                .iter()
                .zip(&times)
                .map(|(id, t)| (id.to_string(), t.iter().flatten().copied().collect()))
                .collect();
            return Err(Error::CommandFailed(Box::new(RunFailure {
                algorithm: entry.name.clone(),
                repetition: s.repetition,
                status: status.to_string(),
                completed: slot,
                planned: plan.len(),
                partial,
                audit,
            })));
        }
        // Timer resolution can round a tiny run to zero.
        times[s.algorithm][s.repetition] = Some(elapsed.max(f64::MIN_POSITIVE));
    }

    let columns = times
        .into_iter()
        .map(|t| t.into_iter().map(|v| v.expect("every slot executed")).collect())
        .collect();
    Ok(MeasurementRun {
        dataset: TimingDataset::from_parts(ids, columns)?,
        audit,
    })
}
