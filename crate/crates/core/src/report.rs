//! Markdown summary over whatever artifacts exist in an output directory.
//!
//! The report is a pure function of the artifact files: no timestamps, no
//! host details, so regenerating it from the same artifacts gives the same
//! bytes. Each number is followed by the file it came from; missing steps
//! are listed with the command that produces them.

use std::path::Path;

use serde_json::Value;

use crate::artifacts::{self, STRATEGIES};
use crate::dataset::Column;
use crate::error::{Error, Result};
use crate::trainer::Partition;

const METRIC_COLUMNS: [&str; 6] = ["RSquare", "RMSE", "Mean Abs Dev", "-LogLikelihood", "SSE", "Sum Freq"];

pub fn generate_report(out_dir: &Path) -> Result<String> {
    let mut r = Report { root: out_dir, text: String::new() };
    r.line("# NOx model report");
    r.line("");
    r.dataset()?;
    r.correlation()?;
    for strategy in STRATEGIES {
        r.strategy(strategy)?;
    }
    Ok(r.text)
}

struct Report<'a> {
    root: &'a Path,
    text: String,
}

impl Report<'_> {
    fn line(&mut self, s: &str) {
        self.text.push_str(s);
        self.text.push('\n');
    }

    fn not_run(&mut self, file: &str, command: &str) {
        self.line(&format!("_not run: `{file}` is missing; run `{command}`._"));
        self.line("");
    }

    fn json(&self, rel: &str) -> Result<Option<Value>> {
        let path = self.root.join(rel);
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|source| Error::Json { path, source })
    }

    fn csv(&self, rel: &str) -> Result<Option<Vec<Vec<String>>>> {
        let path = self.root.join(rel);
        if !path.exists() {
            return Ok(None);
        }
        let body = artifacts::read_artifact(&path, "")?;
        let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|source| Error::Csv { path: path.clone(), source })?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Some(rows))
    }

    fn dataset(&mut self) -> Result<()> {
        self.line("## Dataset");
        self.line("");
        let Some(v) = self.json(artifacts::DATASET_SUMMARY)? else {
            self.not_run(artifacts::DATASET_SUMMARY, "noxcast ingest");
            return Ok(());
        };
        let src = artifacts::DATASET_SUMMARY;
        self.line(&format!("Records: {} (`{src}`)", v["n_records"]));
        self.line("");
        self.line("| Year | Records |");
        self.line("|---|---|");
        if let Some(per_year) = v["per_year"].as_object() {
            for (year, n) in per_year {
                self.line(&format!("| {year} | {n} |"));
            }
        }
        self.line("");
        self.line(&format!("Column ranges (`{src}`):"));
        self.line("");
        self.line("| Variable | Min | Max | Mean |");
        self.line("|---|---|---|---|");
        if let Some(cols) = v["columns"].as_object() {
            for c in Column::ALL {
                if let Some(range) = cols.get(c.name()) {
                    self.line(&format!(
                        "| {} | {} | {} | {} |",
                        c.name(),
                        num(&range["min"], 4),
                        num(&range["max"], 4),
                        num(&range["mean"], 4)
                    ));
                }
            }
        }
        self.line("");
        Ok(())
    }

    fn correlation(&mut self) -> Result<()> {
        self.line("## Correlations");
        self.line("");
        let Some(rows) = self.csv(artifacts::CORRELATION)? else {
            self.not_run(artifacts::CORRELATION, "noxcast stats");
            return Ok(());
        };
        self.line(&format!("Pearson correlations (`{}`):", artifacts::CORRELATION));
        self.line("");
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.trim().to_string()).collect();
            self.line(&format!("| {} |", cells.join(" | ")));
            if i == 0 {
                self.line(&format!("|{}", "---|".repeat(cells.len())));
            }
        }
        self.line("");
        if self.root.join(artifacts::COLUMN_STATS).exists() {
            self.line(&format!(
                "Boxplot summaries and histograms: `{}`.",
                artifacts::COLUMN_STATS
            ));
            self.line("");
        }
        Ok(())
    }

    fn strategy(&mut self, strategy: &str) -> Result<()> {
        self.line(&format!("## Strategy: {strategy}"));
        self.line("");
        let dir = |f: &str| format!("{strategy}/{f}");

        let train = dir(artifacts::TRAIN_SUMMARY);
        match self.json(&train)? {
            Some(v) => {
                if let Some(c) = v["caption"].as_str() {
                    self.line(&format!("{c}."));
                    self.line("");
                }
                self.line(&format!(
                    "Training: {} epochs, best epoch {}, best validation SSE {}, stop reason {} (`{train}`)",
                    v["epochs_run"],
                    v["best_epoch"],
                    num(&v["best_validation_sse"], 4),
                    v["stop_reason"].as_str().unwrap_or("?")
                ));
                self.line("");
            }
            None => self.not_run(&train, &format!("noxcast train --strategy {strategy}")),
        }

        self.line("### Fit metrics");
        self.line("");
        let mut table = Vec::new();
        let mut caption = None;
        for p in Partition::ALL {
            let file = dir(&artifacts::metrics_file(p));
            if let Some(v) = self.json(&file)? {
                caption = caption.or_else(|| v["caption"].as_str().map(str::to_string));
                table.push((p, file, v));
            }
        }
        if table.is_empty() {
            self.not_run(&dir("metrics_*.json"), &format!("noxcast evaluate --strategy {strategy}"));
        } else {
            if let Some(c) = caption {
                self.line(&format!("Table: {c}"));
                self.line("");
            }
            self.line(&format!("| Measure | {} |", table.iter().map(|t| t.0.title()).collect::<Vec<_>>().join(" | ")));
            self.line(&format!("|---|{}", "---|".repeat(table.len())));
            for m in METRIC_COLUMNS {
                let cells: Vec<String> = table.iter().map(|(_, _, v)| num(&v[m], 4)).collect();
                self.line(&format!("| {m} | {} |", cells.join(" | ")));
            }
            self.line("");
            let sources: Vec<String> = table.iter().map(|t| format!("`{}`", t.1)).collect();
            self.line(&format!("Sources: {}", sources.join(", ")));
            self.line("");
            let residuals: Vec<String> = Partition::ALL
                .iter()
                .map(|p| dir(&artifacts::residuals_file(*p)))
                .filter(|f| self.root.join(f).exists())
                .map(|f| format!("`{f}`"))
                .collect();
            if !residuals.is_empty() {
                self.line(&format!("Actual vs. predicted and residuals: {}", residuals.join(", ")));
                self.line("");
            }
        }

        self.line("### Variable importance");
        self.line("");
        let imp = dir(artifacts::IMPORTANCE);
        match self.csv(&imp)? {
            Some(rows) => {
                self.line(&format!("Permutation importance, drop in R² (`{imp}`):"));
                self.line("");
                self.line("| Rank | Variable | Score | Std |");
                self.line("|---|---|---|---|");
                for row in rows.iter().skip(1) {
                    if let [var, score, std, rank] = row.as_slice() {
                        self.line(&format!("| {rank} | {var} | {} | {} |", fixed(score, 4), fixed(std, 4)));
                    }
                }
                self.line("");
            }
            None => self.not_run(&imp, &format!("noxcast importance --strategy {strategy}")),
        }

        self.line("### Prediction profiles");
        self.line("");
        let profiles: Vec<String> = Column::PREDICTORS
            .iter()
            .map(|c| dir(&artifacts::profile_file(*c)))
            .filter(|f| self.root.join(f).exists())
            .collect();
        if profiles.is_empty() {
            self.not_run(&dir("profile_*.csv"), &format!("noxcast profile --strategy {strategy}"));
        } else {
            self.line("| Variable | Min predicted | Max predicted | Source |");
            self.line("|---|---|---|---|");
            for f in &profiles {
                let rows = self.csv(f)?.unwrap_or_default();
                let name = rows.first().and_then(|h| h.first()).cloned().unwrap_or_default();
                let preds: Vec<f64> = rows.iter().skip(1).filter_map(|r| r.get(1)?.parse().ok()).collect();
                let lo = preds.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = preds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                self.line(&format!("| {name} | {lo:.4} | {hi:.4} | `{f}` |"));
            }
            self.line("");
        }

        self.line("### Optimal settings");
        self.line("");
        let opt = dir(artifacts::OPTIMUM);
        match self.json(&opt)? {
            Some(v) => {
                self.line(&format!(
                    "Predicted NOx at optimum: {} mg/m³, desirability {} (`{opt}`)",
                    num(&v["predicted_nox"], 4),
                    num(&v["desirability"], 4)
                ));
                self.line("");
                self.line("| Variable | Setting |");
                self.line("|---|---|");
                for c in Column::PREDICTORS {
                    self.line(&format!("| {} | {} |", c.name(), num(&v["x_star"][c.name()], 4)));
                }
                self.line("");
            }
            None => self.not_run(&opt, &format!("noxcast optimize --strategy {strategy}")),
        }
        Ok(())
    }
}

fn num(v: &Value, digits: usize) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.digits$}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::Null => "n/a".to_string(),
        other => other.to_string(),
    }
}

fn fixed(s: &str, digits: usize) -> String {
    s.parse::<f64>().map(|x| format!("{x:.digits$}")).unwrap_or_else(|_| s.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_directory_lists_every_step_as_not_run() {
        let dir = tempfile::tempdir().unwrap();
        let text = generate_report(dir.path()).unwrap();
        for cmd in ["noxcast ingest", "noxcast stats", "noxcast train --strategy temporal", "noxcast optimize --strategy stratified"] {
            assert!(text.contains(cmd), "{cmd}");
        }
        assert_eq!(text, generate_report(dir.path()).unwrap());
    }

    #[test]
    fn numbers_name_their_source() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(artifacts::DATASET_SUMMARY),
            r#"{"n_records": 3, "per_year": {"2011": 3}, "columns": {}}"#,
        )
        .unwrap();
        let text = generate_report(dir.path()).unwrap();
        assert!(text.contains("Records: 3 (`dataset_summary.json`)"));
        assert!(text.contains("| 2011 | 3 |"));
    }
}
