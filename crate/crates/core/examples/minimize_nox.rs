// Searches the observed operating box for settings that minimize the
// predicted NOx, and compares the result with every observed record.

use std::path::Path;

use noxcast::dataset::{csv_files_in, load_csv, Column, Dataset, Schema};
use noxcast::network::{LayerSpec, Regressor};
use noxcast::optimizer::{desirability, minimize_response, BoxConstraints, DesirabilitySpec, OptimizerConfig};
use noxcast::synth::SyntheticPlant;
use noxcast::trainer::{train, SplitStrategy, TrainConfig};

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => load_csv(&csv_files_in(Path::new(&dir))?, &Schema::public_dataset()),
        None => Ok(SyntheticPlant::small(per_year, 9).generate()),
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

    let bounds = BoxConstraints::observed(&ds)?;
    let spec = DesirabilitySpec::minimize_observed(&ds)?;
    let opt = OptimizerConfig {
        seed: 4,
        ..OptimizerConfig::default()
    };
    let result = minimize_response(&model, &bounds, ds.records(), &spec, &opt)?;

    println!("predicted NOx at optimum: {:.3} (desirability {:.3})", result.predicted_nox, result.desirability);
    for (c, v) in Column::PREDICTORS.iter().zip(&result.x_star) {
        println!("  {:<5}{v:>10.3} {}", c.name(), c.unit());
    }

    let inputs: Vec<_> = ds.records().iter().map(|r| r.values).collect();
    let best_row = model.predict_batch(&inputs).into_iter().fold(f64::INFINITY, f64::min);
    println!("lowest prediction over the {} observed rows: {best_row:.3}", inputs.len());
    println!("desirability of that row: {:.3}", desirability(best_row, &spec)?);
    assert!(result.predicted_nox <= best_row);
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400, TrainConfig::default().max_epochs)
}
