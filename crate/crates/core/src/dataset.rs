//! Ingest of the per-year turbine CSV files.
//!
//! Each file holds one calendar year of hourly observations. Records keep the
//! order in which they appear, files are concatenated in path order, and the
//! year of every record comes from the file it was read from.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of process variables fed to the model.
pub const N_PREDICTORS: usize = 9;

/// Predictor vector in canonical order (see [`Column::PREDICTORS`]).
pub type Predictors = [f64; N_PREDICTORS];

/// Canonical dataset columns: nine process variables and the NOx response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Column {
    AT,
    AP,
    AH,
    AFDP,
    TEP,
    TIT,
    TET,
    TEY,
    CDP,
    NOX,
}

impl Column {
    /// Predictors in the order used by [`Predictors`] and the network input.
    pub const PREDICTORS: [Column; N_PREDICTORS] = [
        Column::AT,
        Column::AP,
        Column::AH,
        Column::AFDP,
        Column::TEP,
        Column::TIT,
        Column::TET,
        Column::TEY,
        Column::CDP,
    ];

    /// All ten columns, predictors first.
    pub const ALL: [Column; 10] = [
        Column::AT,
        Column::AP,
        Column::AH,
        Column::AFDP,
        Column::TEP,
        Column::TIT,
        Column::TET,
        Column::TEY,
        Column::CDP,
        Column::NOX,
    ];

    /// Row/column order of the published correlation table.
    pub const CORRELATION_ORDER: [Column; 10] = [
        Column::NOX,
        Column::AT,
        Column::AH,
        Column::AP,
        Column::TIT,
        Column::TET,
        Column::AFDP,
        Column::CDP,
        Column::TEP,
        Column::TEY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::AT => "AT",
            Column::AP => "AP",
            Column::AH => "AH",
            Column::AFDP => "AFDP",
            Column::TEP => "TEP",
            Column::TIT => "TIT",
            Column::TET => "TET",
            Column::TEY => "TEY",
            Column::CDP => "CDP",
            Column::NOX => "NOX",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Column::AT | Column::TIT | Column::TET => "C",
            Column::AP | Column::AFDP | Column::TEP => "mbar",
            Column::AH => "%",
            Column::TEY => "MWh",
            Column::CDP => "bar",
            Column::NOX => "mg/m3",
        }
    }

    /// Long description, used in reports.
    pub fn description(self) -> &'static str {
        match self {
            Column::AT => "Ambient temperature",
            Column::AP => "Ambient pressure",
            Column::AH => "Ambient humidity",
            Column::AFDP => "Air filter difference pressure",
            Column::TEP => "Gas turbine exhaust pressure",
            Column::TIT => "Turbine inlet temperature",
            Column::TET => "Turbine exhaust temperature",
            Column::TEY => "Turbine energy yield",
            Column::CDP => "Compressor discharge pressure",
            Column::NOX => "NOx emissions",
        }
    }

    /// Position in [`Predictors`], or `None` for the response.
    pub fn predictor_index(self) -> Option<usize> {
        Column::PREDICTORS.iter().position(|&c| c == self)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownVariable(s.to_string()))
    }
}

/// Maps one canonical column onto a header in the raw files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub canonical_name: Column,
    pub source_name: String,
    pub unit: String,
}

/// The full ten-column mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    columns: Vec<ColumnSchema>,
}

#[derive(Serialize, Deserialize)]
struct SchemaEntry {
    source_name: String,
    unit: String,
}

fn normalize_unit(unit: &str) -> String {
    unit.trim()
        .replace('°', "")
        .replace('³', "3")
        .to_ascii_lowercase()
}

impl Schema {
    /// Validates that every canonical column is mapped exactly once, source
    /// names are distinct, and units agree with the canonical units.
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        if columns.len() != Column::ALL.len() {
            return Err(Error::Schema(format!(
                "expected {} columns, got {}",
                Column::ALL.len(),
                columns.len()
            )));
        }
        for col in Column::ALL {
            let n = columns.iter().filter(|c| c.canonical_name == col).count();
            if n != 1 {
                return Err(Error::Schema(format!("column {col} mapped {n} times")));
            }
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].iter().any(|o| o.source_name == c.source_name) {
                return Err(Error::Schema(format!(
                    "source column `{}` used twice",
                    c.source_name
                )));
            }
            if normalize_unit(&c.unit) != normalize_unit(c.canonical_name.unit()) {
                return Err(Error::Schema(format!(
                    "column {} has unit `{}`, expected `{}`",
                    c.canonical_name,
                    c.unit,
                    c.canonical_name.unit()
                )));
            }
        }
        let mut columns = columns;
        columns.sort_by_key(|c| c.canonical_name);
        Ok(Schema { columns })
    }

    /// Headers of the public turbine files, which call TEP `GTEP` and TET `TAT`.
    pub fn public_dataset() -> Self {
        let columns = Column::ALL
            .into_iter()
            .map(|c| ColumnSchema {
                canonical_name: c,
                source_name: match c {
                    Column::TEP => "GTEP".to_string(),
                    Column::TET => "TAT".to_string(),
                    other => other.name().to_string(),
                },
                unit: c.unit().to_string(),
            })
            .collect();
        Schema { columns }
    }

    /// Source names equal to the canonical names.
    pub fn canonical() -> Self {
        let columns = Column::ALL
            .into_iter()
            .map(|c| ColumnSchema {
                canonical_name: c,
                source_name: c.name().to_string(),
                unit: c.unit().to_string(),
            })
            .collect();
        Schema { columns }
    }

    pub fn columns(&self) -> &[ColumnSchema] {
        &self.columns
    }

    pub fn get(&self, column: Column) -> &ColumnSchema {
        // construction guarantees presence
        self.columns
            .iter()
            .find(|c| c.canonical_name == column)
            .expect("schema holds every column")
    }

    /// Parses `{"AT": {"source_name": "AT", "unit": "C"}, ...}`.
    pub fn from_json_str(text: &str) -> std::result::Result<Self, SchemaParseError> {
        let raw: BTreeMap<String, SchemaEntry> =
            serde_json::from_str(text).map_err(SchemaParseError::Json)?;
        let columns = raw
            .into_iter()
            .map(|(name, entry)| {
                Ok(ColumnSchema {
                    canonical_name: name.parse()?,
                    source_name: entry.source_name,
                    unit: entry.unit,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(SchemaParseError::Invalid)?;
        Schema::new(columns).map_err(SchemaParseError::Invalid)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schema::from_json_str(&text).map_err(|e| match e {
            SchemaParseError::Json(source) => Error::Json {
                path: path.to_path_buf(),
                source,
            },
            SchemaParseError::Invalid(e) => e,
        })
    }

    pub fn to_json_string(&self) -> String {
        let map: BTreeMap<&str, SchemaEntry> = self
            .columns
            .iter()
            .map(|c| {
                (
                    c.canonical_name.name(),
                    SchemaEntry {
                        source_name: c.source_name.clone(),
                        unit: c.unit.clone(),
                    },
                )
            })
            .collect();
        serde_json::to_string_pretty(&map).expect("schema serializes")
    }
}

#[derive(Debug)]
pub enum SchemaParseError {
    Json(serde_json::Error),
    Invalid(Error),
}

/// One hourly observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessRecord {
    pub year: i32,
    pub values: Predictors,
    pub nox: f64,
}

impl ProcessRecord {
    pub fn get(&self, column: Column) -> f64 {
        match column.predictor_index() {
            Some(i) => self.values[i],
            None => self.nox,
        }
    }
}

/// A row that was rejected while loading in lenient mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    pub path: PathBuf,
    /// 1-based data row (the header is row 0).
    pub row: usize,
    pub column: String,
    pub value: String,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: row {}, column `{}`: rejected value {:?}",
            self.path.display(),
            self.row,
            self.column,
            self.value
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MalformedRows {
    /// Abort on the first bad cell.
    #[default]
    Fail,
    /// Drop the row and keep a diagnostic.
    Reject,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub years: RangeInclusive<i32>,
    pub malformed: MalformedRows,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            years: 2011..=2015,
            malformed: MalformedRows::Fail,
        }
    }
}

/// One input file together with the year its rows belong to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct YearFile {
    pub path: PathBuf,
    pub year: i32,
}

impl YearFile {
    /// Takes the year from the last 4-digit run in the file name.
    pub fn from_path(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let year = infer_year(&path).ok_or_else(|| Error::UnknownYear { path: path.clone() })?;
        Ok(YearFile { path, year })
    }
}

fn infer_year(path: &Path) -> Option<i32> {
    let stem = path.file_stem()?.to_str()?;
    let bytes = stem.as_bytes();
    let mut found = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i - start == 4 {
                found = stem[start..i].parse().ok();
            }
        } else {
            i += 1;
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<ProcessRecord>,
    schema: Schema,
    year_index: BTreeMap<i32, Vec<usize>>,
}

/// Outcome of a load: the dataset plus row bookkeeping.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: Dataset,
    pub rows_read: usize,
    pub diagnostics: Vec<RowDiagnostic>,
}

/// Loads files whose names carry the year (`gt_2011.csv`, ...).
pub fn load_csv<P: AsRef<Path>>(paths: &[P], schema: &Schema) -> Result<Dataset> {
    let files = paths
        .iter()
        .map(|p| YearFile::from_path(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(load_year_files(&files, schema, &LoadOptions::default())?.dataset)
}

/// The `.csv` files directly inside `dir`, sorted by path.
pub fn csv_files_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    found.sort();
    Ok(found)
}

/// Loads explicit (path, year) pairs. Files are read in path order.
pub fn load_year_files(files: &[YearFile], schema: &Schema, options: &LoadOptions) -> Result<Loaded> {
    let mut files = files.to_vec();
    files.sort();

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut rows_read = 0;
    for file in &files {
        if !options.years.contains(&file.year) {
            return Err(Error::YearOutOfRange {
                path: file.path.clone(),
                year: file.year,
                min: *options.years.start(),
                max: *options.years.end(),
            });
        }
        let handle = File::open(&file.path).map_err(|e| Error::io(&file.path, e))?;
        let (mut rows, mut diags, n) = parse_year_csv(handle, &file.path, file.year, schema, options.malformed)?;
        rows_read += n;
        records.append(&mut rows);
        diagnostics.append(&mut diags);
    }
    let mut dataset = Dataset::new(records, schema.clone());
    for file in &files {
        dataset.year_index.entry(file.year).or_default();
    }
    Ok(Loaded {
        dataset,
        rows_read,
        diagnostics,
    })
}

fn parse_year_csv<R: std::io::Read>(
    reader: R,
    path: &Path,
    year: i32,
    schema: &Schema,
    malformed: MalformedRows,
) -> Result<(Vec<ProcessRecord>, Vec<RowDiagnostic>, usize)> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();

    let mut positions = [0usize; 10];
    for (slot, col) in positions.iter_mut().zip(Column::ALL) {
        let source = &schema.get(col).source_name;
        *slot = headers
            .iter()
            .position(|h| h == source)
            .ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                column: source.clone(),
            })?;
    }

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut n = 0;
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        n += 1;
        let mut vals = [0.0; 10];
        let mut bad = None;
        for ((v, &pos), col) in vals.iter_mut().zip(&positions).zip(Column::ALL) {
            let cell = row.get(pos).unwrap_or("");
            match cell.parse::<f64>() {
                Ok(x) if x.is_finite() => *v = x,
                _ => {
                    bad = Some(RowDiagnostic {
                        path: path.to_path_buf(),
                        row: i + 1,
                        column: schema.get(col).source_name.clone(),
                        value: cell.to_string(),
                    });
                    break;
                }
            }
        }
        match (bad, malformed) {
            (None, _) => {
                let mut values = [0.0; N_PREDICTORS];
                values.copy_from_slice(&vals[..N_PREDICTORS]);
                records.push(ProcessRecord {
                    year,
                    values,
                    nox: vals[N_PREDICTORS],
                });
            }
            (Some(d), MalformedRows::Fail) => {
                return Err(Error::BadCell {
                    path: d.path,
                    row: d.row,
                    column: d.column,
                    value: d.value,
                })
            }
            (Some(d), MalformedRows::Reject) => diagnostics.push(d),
        }
    }
    Ok((records, diagnostics, n))
}

impl Dataset {
    pub fn new(records: Vec<ProcessRecord>, schema: Schema) -> Self {
        let mut year_index: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            year_index.entry(r.year).or_default().push(i);
        }
        Dataset {
            records,
            schema,
            year_index,
        }
    }

    pub fn records(&self) -> &[ProcessRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Record ordinals per year, ascending.
    pub fn year_index(&self) -> &BTreeMap<i32, Vec<usize>> {
        &self.year_index
    }

    pub fn years(&self) -> Vec<i32> {
        self.year_index.keys().copied().collect()
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.records.iter().map(|r| r.get(column)).collect()
    }

    pub fn summary(&self) -> DatasetSummary {
        let per_year = self
            .year_index
            .iter()
            .map(|(y, idx)| (y.to_string(), idx.len()))
            .collect();
        let columns = Column::ALL
            .into_iter()
            .filter(|_| !self.records.is_empty())
            .map(|c| {
                let values = self.column(c);
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                (c.name().to_string(), ColumnRange { min, max, mean })
            })
            .collect();
        DatasetSummary {
            n_records: self.records.len(),
            per_year,
            columns,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_records: usize,
    pub per_year: BTreeMap<String, usize>,
    pub columns: BTreeMap<String, ColumnRange>,
}

/// Per-predictor z-scoring, fitted on one subset of the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Predictors,
    pub stds: Predictors,
    /// Label of the records the statistics came from (e.g. `train`).
    pub fitted_on: String,
}

impl Standardizer {
    /// Population mean and standard deviation over `subset`.
    pub fn fit(dataset: &Dataset, subset: &[usize], fitted_on: impl Into<String>) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::TooFewValues { needed: 1, got: 0 });
        }
        let n = subset.len() as f64;
        let mut means = [0.0; N_PREDICTORS];
        for &i in subset {
            for (m, v) in means.iter_mut().zip(&dataset.records[i].values) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);

        let mut stds = [0.0; N_PREDICTORS];
        for &i in subset {
            for ((s, v), m) in stds.iter_mut().zip(&dataset.records[i].values).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        for (j, s) in stds.iter_mut().enumerate() {
            *s = (*s / n).sqrt();
            if !(*s > 0.0) {
                return Err(Error::ConstantColumn(Column::PREDICTORS[j].name().to_string()));
            }
        }
        Ok(Standardizer {
            means,
            stds,
            fitted_on: fitted_on.into(),
        })
    }

    /// Identity transform (mean 0, std 1).
    pub fn identity() -> Self {
        Standardizer {
            means: [0.0; N_PREDICTORS],
            stds: [1.0; N_PREDICTORS],
            fitted_on: "identity".to_string(),
        }
    }

    pub fn apply(&self, x: &Predictors) -> Predictors {
        std::array::from_fn(|i| (x[i] - self.means[i]) / self.stds[i])
    }

    pub fn invert(&self, z: &Predictors) -> Predictors {
        std::array::from_fn(|i| z[i] * self.stds[i] + self.means[i])
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok = self.means.iter().all(|m| m.is_finite())
            && self.stds.iter().all(|s| s.is_finite() && *s > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Model("standardizer has non-finite or non-positive entries".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    const HEADER: &str = "AT,AP,AH,AFDP,GTEP,TIT,TAT,TEY,CDP,CO,NOX\n";

    fn row(seed: f64) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},1.0,{}\n",
            10.0 + seed,
            1010.0 + seed,
            70.0 - seed,
            3.5,
            25.0,
            1080.0 + seed,
            545.0,
            130.0,
            12.0,
            60.0 + seed
        )
    }

    #[test]
    fn loads_public_headers_and_years() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(dir.path(), "gt_2012.csv", &format!("{HEADER}{}{}", row(1.0), row(2.0)));
        let b = write_file(dir.path(), "gt_2011.csv", &format!("{HEADER}{}", row(0.0)));
        let ds = load_csv(&[a, b], &Schema::public_dataset()).unwrap();
        assert_eq!(ds.len(), 3);
        // path-sorted: 2011 first
        assert_eq!(ds.records()[0].year, 2011);
        assert_eq!(ds.records()[0].nox, 60.0);
        assert_eq!(ds.records()[2].values[5], 1082.0);
        assert_eq!(ds.year_index()[&2012], vec![1, 2]);
    }

    #[test]
    fn header_only_file_gives_empty_year() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(dir.path(), "gt_2013.csv", HEADER);
        let ds = load_csv(&[a], &Schema::public_dataset()).unwrap();
        assert!(ds.is_empty());
        assert_eq!(ds.year_index()[&2013], Vec::<usize>::new());
    }

    #[test]
    fn bad_cell_names_file_row_column() {
        let dir = tempfile::tempdir().unwrap();
        let bad = row(0.0).replacen("1080", "abc", 1);
        let a = write_file(dir.path(), "gt_2014.csv", &format!("{HEADER}{}{bad}", row(1.0)));
        match load_csv(std::slice::from_ref(&a), &Schema::public_dataset()) {
            Err(Error::BadCell { path, row, column, value }) => {
                assert_eq!(path, a);
                assert_eq!(row, 2);
                assert_eq!(column, "TIT");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lenient_mode_rejects_rows_with_diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let bad1 = row(0.0).replacen("1080", "abc", 1);
        let bad2 = row(0.0).replacen("60", "", 1);
        let a = write_file(
            dir.path(),
            "gt_2014.csv",
            &format!("{HEADER}{}{bad1}{}{bad2}", row(1.0), row(2.0)),
        );
        let opts = LoadOptions {
            malformed: MalformedRows::Reject,
            ..LoadOptions::default()
        };
        let loaded = load_year_files(&[YearFile::from_path(a).unwrap()], &Schema::public_dataset(), &opts).unwrap();
        assert_eq!(loaded.rows_read, 4);
        assert_eq!(loaded.diagnostics.len(), 2);
        assert_eq!(loaded.dataset.len(), 2);
        assert_eq!(loaded.diagnostics[1].column, "NOX");
    }

    #[test]
    fn missing_column_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(dir.path(), "gt_2011.csv", "AT,AP\n1,2\n");
        assert!(matches!(
            load_csv(&[a], &Schema::public_dataset()),
            Err(Error::MissingColumn { column, .. }) if column == "AH"
        ));
        let missing = dir.path().join("gt_2015.csv");
        assert!(matches!(load_csv(&[missing], &Schema::public_dataset()), Err(Error::Io { .. })));
    }

    #[test]
    fn year_inference() {
        assert_eq!(infer_year(Path::new("data/gt_2011.csv")), Some(2011));
        assert_eq!(infer_year(Path::new("2013-hourly.csv")), Some(2013));
        assert_eq!(infer_year(Path::new("turbine.csv")), None);
        assert!(matches!(YearFile::from_path("x.csv"), Err(Error::UnknownYear { .. })));
    }

    #[test]
    fn year_outside_range_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(dir.path(), "gt_2019.csv", HEADER);
        assert!(matches!(
            load_csv(&[a], &Schema::public_dataset()),
            Err(Error::YearOutOfRange { year: 2019, .. })
        ));
    }

    #[test]
    fn schema_json_round_trip_and_validation() {
        let s = Schema::public_dataset();
        let back = Schema::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(s, back);

        let mut cols = Schema::canonical().columns().to_vec();
        cols[0].unit = "K".into();
        assert!(matches!(Schema::new(cols), Err(Error::Schema(_))));

        let mut cols = Schema::canonical().columns().to_vec();
        cols.pop();
        assert!(Schema::new(cols).is_err());

        let mut cols = Schema::canonical().columns().to_vec();
        cols[1].source_name = cols[0].source_name.clone();
        assert!(Schema::new(cols).is_err());

        // unicode unit spellings are accepted
        let mut cols = Schema::canonical().columns().to_vec();
        cols[0].unit = "°C".into();
        assert!(Schema::new(cols).is_ok());
    }

    fn dataset_from(values: &[Predictors]) -> Dataset {
        let records = values
            .iter()
            .map(|v| ProcessRecord { year: 2011, values: *v, nox: 1.0 })
            .collect();
        Dataset::new(records, Schema::canonical())
    }

    #[test]
    fn standardizer_two_point_case() {
        let mut a = [5.0; N_PREDICTORS];
        let mut b = [7.0; N_PREDICTORS];
        a[0] = 1.0;
        b[0] = 3.0;
        let ds = dataset_from(&[a, b]);
        let s = Standardizer::fit(&ds, &[0, 1], "train").unwrap();
        assert_eq!(s.means[0], 2.0);
        assert_eq!(s.stds[0], 1.0);
        assert_eq!(s.apply(&s.means), [0.0; N_PREDICTORS]);
        assert_eq!(s.invert(&[0.0; N_PREDICTORS]), s.means);
    }

    #[test]
    fn standardizer_constant_column_error() {
        let mut a = [1.0; N_PREDICTORS];
        let mut b = [2.0; N_PREDICTORS];
        a[3] = 4.0;
        b[3] = 4.0;
        let ds = dataset_from(&[a, b]);
        assert!(matches!(
            Standardizer::fit(&ds, &[0, 1], "train"),
            Err(Error::ConstantColumn(c)) if c == "AFDP"
        ));
        assert!(Standardizer::fit(&ds, &[], "train").is_err());
    }
}
