//! CSV and JSON encodings of [`TimingDataset`].
//!
//! CSV: header `algorithm,run,seconds`, one row per measurement. Algorithms
//! appear in order of first occurrence; rows of one algorithm are ordered by
//! `run`.
//!
//! JSON: `{"algorithms":[{"name":"a","times":[0.0012, ...]}]}`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::TimingDataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetFormat {
    Csv,
    Json,
}

impl DatasetFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(DatasetFormat::Csv),
            "json" => Some(DatasetFormat::Json),
            _ => None,
        }
    }
}

impl FromStr for DatasetFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DatasetFormat::Csv),
            "json" => Ok(DatasetFormat::Json),
            other => Err(Error::InvalidParams(format!("unknown dataset format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDataset {
    algorithms: Vec<JsonAlgorithm>,
}

#[derive(Serialize, Deserialize)]
struct JsonAlgorithm {
    name: String,
    times: Vec<f64>,
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<TimingDataset> {
    let reader = BufReader::new(File::open(path).map_err(Error::file(path))?);
    let parsed = match format {
        DatasetFormat::Csv => read_csv(reader),
        DatasetFormat::Json => read_json(reader),
    };
    parsed.map_err(|e| match e {
        Error::Csv(e) => Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        },
        Error::Json(e) => Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        },
        other => other,
    })
}

pub fn save_dataset(dataset: &TimingDataset, path: &Path, format: DatasetFormat) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path).map_err(Error::file(path))?);
    match format {
        DatasetFormat::Csv => write_csv(dataset, &mut writer)?,
        DatasetFormat::Json => write_json(dataset, &mut writer)?,
    }
    writer.flush()?;
    Ok(())
}

pub(crate) fn read_csv<R: Read>(reader: R) -> Result<TimingDataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut grouped: IndexMap<String, Vec<(u64, f64)>> = IndexMap::new();
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            path: Default::default(),
            reason: format!("missing column `{name}`"),
        })
    };
    let (alg_col, run_col, sec_col) = (column("algorithm")?, column("run")?, column("seconds")?);
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |what: &str| Error::Parse {
            path: Default::default(),
            reason: format!("row {}: invalid {what}", line + 1),
        };
        let run: u64 = field(run_col).parse().map_err(|_| bad("run"))?;
        // std parsing is correctly rounded, which keeps the round trip bit-exact
        let seconds: f64 = field(sec_col).parse().map_err(|_| bad("seconds"))?;
        grouped
            .entry(field(alg_col).to_owned())
            .or_default()
            .push((run, seconds));
    }
    let mut entries = Vec::with_capacity(grouped.len());
    for (name, mut rows) in grouped {
        rows.sort_by_key(|&(run, _)| run);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse {
                path: Default::default(),
                reason: format!("duplicate run {} for algorithm `{name}`", w[0].0),
            });
        }
        entries.push((name, rows.into_iter().map(|(_, s)| s).collect()));
    }
    TimingDataset::new(entries)
}

pub(crate) fn write_csv<W: Write>(dataset: &TimingDataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["algorithm", "run", "seconds"])?;
    for (id, times) in dataset.iter() {
        for (run, &seconds) in times.iter().enumerate() {
            wtr.write_record([id.as_str(), &run.to_string(), &seconds.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn read_json<R: Read>(reader: R) -> Result<TimingDataset> {
    let doc: JsonDataset = serde_json::from_reader(reader)?;
    TimingDataset::new(doc.algorithms.into_iter().map(|a| (a.name, a.times)))
}

pub(crate) fn write_json<W: Write>(dataset: &TimingDataset, writer: W) -> Result<()> {
    let doc = JsonDataset {
        algorithms: dataset
            .iter()
            .map(|(id, t)| JsonAlgorithm {
                name: id.as_str().to_owned(),
                times: t.to_vec(),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(writer, &doc)?;
    Ok(())
}

impl Serialize for TimingDataset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JsonDataset {
            algorithms: self
                .iter()
                .map(|(id, t)| JsonAlgorithm {
                    name: id.as_str().to_owned(),
                    times: t.to_vec(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TimingDataset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = JsonDataset::deserialize(deserializer)?;
        TimingDataset::new(doc.algorithms.into_iter().map(|a| (a.name, a.times))).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_two_by_three() {
        let text = "algorithm,run,seconds\na,0,0.1\na,1,0.2\nb,0,0.3\na,2,0.15\nb,2,0.5\nb,1,0.4\n";
        let d = read_csv(text.as_bytes()).unwrap();
        assert_eq!((d.len(), d.n()), (2, 3));
        assert_eq!(d.times(0), &[0.1, 0.2, 0.15]);
        assert_eq!(d.times(1), &[0.3, 0.4, 0.5]);
    }

    #[test]
    fn csv_ragged_is_inconsistent() {
        let text = "algorithm,run,seconds\na,0,1\na,1,1\na,2,1\nb,0,1\nb,1,1\n";
        let err = read_csv(text.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("inconsistent N"), "{err}");
    }

    #[test]
    fn csv_rejects_invalid_values() {
        let text = "algorithm,run,seconds\na,0,-1\n";
        assert!(read_csv(text.as_bytes())
            .unwrap_err()
            .to_string()
            .starts_with("invalid measurement"));
        let text = "algorithm,run,seconds\na,0,1\nb,0,1\na,0,2\n";
        assert!(read_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn json_duplicate_name() {
        let text = r#"{"algorithms":[{"name":"x","times":[1]},{"name":"x","times":[2]}]}"#;
        assert!(read_json(text.as_bytes())
            .unwrap_err()
            .to_string()
            .starts_with("duplicate algorithm"));
    }

    #[test]
    fn json_four_by_fifty() {
        let algorithms: Vec<String> = (0..4)
            .map(|j| {
                let times: Vec<String> = (0..50)
                    .map(|i| format!("{}", 1.4e-3 + (i * (j + 1)) as f64 * 1e-5))
                    .collect();
                format!(r#"{{"name":"alg{j}","times":[{}]}}"#, times.join(","))
            })
            .collect();
        let text = format!(r#"{{"algorithms":[{}]}}"#, algorithms.join(","));
        let d = read_json(text.as_bytes()).unwrap();
        assert_eq!((d.len(), d.n()), (4, 50));
        assert_eq!(d.algorithms()[3].as_str(), "alg3");
    }

    fn dataset_strategy() -> impl Strategy<Value = TimingDataset> {
        (1usize..5, 1usize..12).prop_flat_map(|(p, n)| {
            prop::collection::vec(prop::collection::vec(1e-9f64..1e3, n), p).prop_map(|cols| {
                TimingDataset::new(cols.into_iter().enumerate().map(|(i, t)| (format!("alg_{i}"), t))).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(d in dataset_strategy()) {
            let mut buf = Vec::new();
            write_csv(&d, &mut buf).unwrap();
            prop_assert_eq!(&read_csv(buf.as_slice()).unwrap(), &d);
            let mut buf = Vec::new();
            write_json(&d, &mut buf).unwrap();
            prop_assert_eq!(&read_json(buf.as_slice()).unwrap(), &d);
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let d = TimingDataset::new([("a", vec![1.25e-3, 3.0e-9]), ("b", vec![0.1, 0.2])]).unwrap();
        for (file, fmt) in [("d.csv", DatasetFormat::Csv), ("d.json", DatasetFormat::Json)] {
            let path = dir.path().join(file);
            assert_eq!(DatasetFormat::from_path(&path), Some(fmt));
            save_dataset(&d, &path, fmt).unwrap();
            assert_eq!(load_dataset(&path, fmt).unwrap(), d);
        }
    }
}
