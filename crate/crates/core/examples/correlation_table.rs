// Pearson correlation matrix plus boxplot and histogram summaries.

use std::path::Path;

use noxcast::dataset::{csv_files_in, load_csv, Column, Dataset, Schema};
use noxcast::stats::{column_stats, pearson_matrix};
use noxcast::synth::SyntheticPlant;

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => load_csv(&csv_files_in(Path::new(&dir))?, &Schema::public_dataset()),
        None => Ok(SyntheticPlant::small(per_year, 11).generate()),
    }
}

pub fn run_example(per_year: usize) -> noxcast::Result<()> {
    let ds = load(per_year)?;
    let m = pearson_matrix(&ds)?;
    print!("{:>6}", "");
    for c in &m.labels {
        print!("{:>7}", c.name());
    }
    println!();
    for (i, row) in m.values.iter().enumerate() {
        print!("{:>6}", m.labels[i].name());
        for v in row {
            print!("{v:>7.3}");
        }
        println!();
    }

    let strongest = Column::PREDICTORS
        .iter()
        .max_by(|a, b| {
            let ra = m.get(Column::NOX, **a).unwrap().abs();
            let rb = m.get(Column::NOX, **b).unwrap().abs();
            ra.total_cmp(&rb)
        })
        .unwrap();
    println!("\nstrongest linear association with NOX: {strongest}");

    println!("\n{:<6}{:>9}{:>9}{:>9}{:>9}{:>9}{:>9}", "var", "min", "Q1", "median", "Q3", "max", "outliers");
    for s in column_stats(&ds, 20)? {
        let b = &s.boxplot;
        println!(
            "{:<6}{:>9.2}{:>9.2}{:>9.2}{:>9.2}{:>9.2}{:>9}",
            s.column.name(),
            b.min,
            b.q1,
            b.median,
            b.q3,
            b.max,
            b.n_outliers
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400)
}
