// Sweeps each predictor over its observed range with the others held at
// their medians and reports how far the predicted NOx moves.

use std::path::Path;

use noxcast::analysis::{profile, BasePoint};
use noxcast::dataset::{csv_files_in, load_csv, Column, Dataset, Schema};
use noxcast::network::LayerSpec;
use noxcast::stats::five_number_summary;
use noxcast::synth::SyntheticPlant;
use noxcast::trainer::{train, SplitStrategy, TrainConfig};

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => load_csv(&csv_files_in(Path::new(&dir))?, &Schema::public_dataset()),
        None => Ok(SyntheticPlant::small(per_year, 5).generate()),
    }
}

pub fn run_example(per_year: usize, max_epochs: usize) -> noxcast::Result<()> {
    let ds = load(per_year)?;
    let split = SplitStrategy::stratified_default(1).apply(&ds)?;
    let config = TrainConfig {
        max_epochs,
        patience: max_epochs.min(100),
        ..TrainConfig::default()
    };
    let model = train(&ds, &split, &LayerSpec::default_pair(), &config)?.network;
    let nox_iqr = five_number_summary(&ds.column(Column::NOX))?.iqr;

    println!("NOX interquartile range: {nox_iqr:.3}");
    println!("{:<6}{:>10}{:>10}{:>12}{:>10}", "var", "from", "to", "NOx range", "% of IQR");
    for c in Column::PREDICTORS {
        let curve = profile(&model, &ds, c, &BasePoint::Medians, 50)?;
        println!(
            "{:<6}{:>10.2}{:>10.2}{:>12.3}{:>10.1}",
            c.name(),
            curve.grid[0],
            curve.grid[curve.grid.len() - 1],
            curve.range(),
            100.0 * curve.range() / nox_iqr
        );
    }
    let tit = profile(&model, &ds, Column::TIT, &BasePoint::Medians, 11)?;
    println!("\n{}", tit.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400, TrainConfig::default().max_epochs)
}
