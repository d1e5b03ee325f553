// Loads yearly CSV files through a column-mapping schema and prints record
// counts and per-column ranges.
//
// Set NOXCAST_DATA to a directory holding gt_2011.csv ... gt_2015.csv to use
// the real files; otherwise synthetic files are written to a temp directory
// and loaded back.

use std::path::{Path, PathBuf};

use noxcast::dataset::{csv_files_in, load_year_files, Column, LoadOptions, MalformedRows, Schema, YearFile};
use noxcast::synth::{write_public_csv, SyntheticPlant};

pub fn run_example(per_year: usize) -> noxcast::Result<()> {
    let scratch = std::env::temp_dir().join(format!("noxcast-load-{}", std::process::id()));
    let paths: Vec<PathBuf> = match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => csv_files_in(Path::new(&dir))?,
        None => write_public_csv(&SyntheticPlant::small(per_year, 3).generate(), &scratch)?,
    };

    // the public files call TEP "GTEP" and TET "TAT"
    let schema = Schema::public_dataset();
    println!("schema: {}", schema.to_json_string());

    let files = paths.iter().map(YearFile::from_path).collect::<noxcast::Result<Vec<_>>>()?;
    let options = LoadOptions {
        malformed: MalformedRows::Reject,
        ..LoadOptions::default()
    };
    let loaded = load_year_files(&files, &schema, &options)?;
    println!("read {} rows, rejected {}", loaded.rows_read, loaded.diagnostics.len());

    let ds = &loaded.dataset;
    for (year, idx) in ds.year_index() {
        println!("{year}: {} records", idx.len());
    }
    let summary = ds.summary();
    println!("{:<6}{:>12}{:>12}{:>12}  unit", "var", "min", "max", "mean");
    for c in Column::ALL {
        let r = &summary.columns[c.name()];
        println!("{:<6}{:>12.3}{:>12.3}{:>12.3}  {}", c.name(), r.min, r.max, r.mean, c.unit());
    }
    let _ = std::fs::remove_dir_all(&scratch);
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400)
}
