//! Artifact names, provenance stamps and atomic writes.
//!
//! Layout under the output directory:
//!
//! ```text
//! dataset_summary.json
//! correlation.csv
//! column_stats.json
//! <strategy>/split.csv
//! <strategy>/model.json
//! <strategy>/history.csv
//! <strategy>/train_summary.json
//! <strategy>/metrics_<partition>.json
//! <strategy>/residuals_<partition>.csv
//! <strategy>/importance.csv
//! <strategy>/profile_<VAR>.csv
//! <strategy>/optimum.json
//! <strategy>/optimizer_trace.csv
//! report.md
//! ```
//!
//! `<strategy>` is `temporal` or `stratified`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::Column;
use crate::error::{Error, Result};
use crate::optimizer::DesirabilitySpec;
use crate::stats::ColumnStats;
use crate::trainer::{MetricsReport, Partition, StopReason};

pub const DATASET_SUMMARY: &str = "dataset_summary.json";
pub const CORRELATION: &str = "correlation.csv";
pub const COLUMN_STATS: &str = "column_stats.json";
pub const SPLIT: &str = "split.csv";
pub const MODEL: &str = "model.json";
pub const HISTORY: &str = "history.csv";
pub const TRAIN_SUMMARY: &str = "train_summary.json";
pub const IMPORTANCE: &str = "importance.csv";
pub const OPTIMUM: &str = "optimum.json";
pub const OPTIMIZER_TRACE: &str = "optimizer_trace.csv";
pub const REPORT: &str = "report.md";

pub const STRATEGIES: [&str; 2] = ["temporal", "stratified"];

pub fn metrics_file(partition: Partition) -> String {
    format!("metrics_{partition}.json")
}

pub fn residuals_file(partition: Partition) -> String {
    format!("residuals_{partition}.csv")
}

pub fn profile_file(variable: Column) -> String {
    format!("profile_{variable}.csv")
}

/// Stamp echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
}

impl Provenance {
    pub fn new(seed: u64, strategy: Option<&str>) -> Self {
        Provenance {
            tool: concat!("noxcast ", env!("CARGO_PKG_VERSION")).to_string(),
            seed,
            strategy: strategy.map(str::to_string),
        }
    }

    /// `# ...` line placed at the top of CSV artifacts.
    pub fn csv_comment(&self) -> String {
        match &self.strategy {
            Some(s) => format!("# {} seed={} strategy={s}\n", self.tool, self.seed),
            None => format!("# {} seed={}\n", self.tool, self.seed),
        }
    }
}

/// JSON payload wrapped with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stamped<T> {
    pub provenance: Provenance,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStatsBody {
    pub columns: Vec<ColumnStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub caption: String,
    pub counts: BTreeMap<String, usize>,
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub best_validation_sse: f64,
    pub stop_reason: StopReason,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsBody {
    pub caption: String,
    #[serde(flatten)]
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumBody {
    /// Optimal setting per process variable, raw units.
    pub x_star: BTreeMap<String, f64>,
    pub predicted_nox: f64,
    pub desirability: f64,
    pub desirability_spec: DesirabilitySpec,
    pub n_starts: usize,
    pub best_start: usize,
}

/// Writes artifacts under one output directory through a temporary file and
/// a rename. Existing files are refused unless `overwrite` is set.
#[derive(Debug)]
pub struct ArtifactWriter {
    root: PathBuf,
    overwrite: bool,
    written: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(root: impl Into<PathBuf>, overwrite: bool) -> Self {
        ArtifactWriter {
            root: root.into(),
            overwrite,
            written: Vec::new(),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write(&mut self, relative: impl AsRef<Path>, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(relative);
        write_atomic(&path, contents, self.overwrite)?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, relative: impl AsRef<Path>, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        self.write(relative, &text)
    }

    pub fn write_csv(&mut self, relative: impl AsRef<Path>, provenance: &Provenance, body: &str) -> Result<PathBuf> {
        let text = format!("{}{body}", provenance.csv_comment());
        self.write(relative, &text)
    }
}

pub fn write_atomic(path: &Path, contents: &str, overwrite: bool) -> Result<()> {
    if path.exists() && !overwrite {
        return Err(Error::ArtifactExists(path.to_path_buf()));
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Reads an artifact, skipping leading `#` provenance lines.
pub fn read_artifact(path: &Path, hint: &str) -> Result<String> {
    if !path.exists() {
        return Err(Error::MissingArtifact {
            path: path.to_path_buf(),
            hint: hint.to_string(),
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_once_unless_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::new(dir.path(), false);
        let p = w.write("a/b.txt", "one").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "one");
        assert!(matches!(w.write("a/b.txt", "two"), Err(Error::ArtifactExists(_))));
        let mut w = ArtifactWriter::new(dir.path(), true);
        w.write("a/b.txt", "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert!(!dir.path().join("a/b.txt.tmp").exists());
    }

    #[test]
    fn csv_provenance_is_skipped_on_read() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::new(dir.path(), false);
        let p = w.write_csv("x.csv", &Provenance::new(7, Some("temporal")), "a,b\n1,2\n").unwrap();
        let raw = std::fs::read_to_string(&p).unwrap();
        assert!(raw.starts_with("# noxcast"));
        assert!(raw.contains("seed=7 strategy=temporal"));
        assert_eq!(read_artifact(&p, "x").unwrap(), "a,b\n1,2\n");
        assert!(matches!(
            read_artifact(&dir.path().join("nope"), "noxcast stats"),
            Err(Error::MissingArtifact { .. })
        ));
    }
}
