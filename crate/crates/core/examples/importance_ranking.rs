// Trains a model and ranks the predictors by permutation importance on the
// validation records.

use std::path::Path;

use noxcast::analysis::permutation_importance;
use noxcast::dataset::{csv_files_in, load_csv, Dataset, Schema};
use noxcast::network::LayerSpec;
use noxcast::synth::SyntheticPlant;
use noxcast::trainer::{train, Partition, SplitStrategy, TrainConfig};

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => load_csv(&csv_files_in(Path::new(&dir))?, &Schema::public_dataset()),
        None => Ok(SyntheticPlant::small(per_year, 21).generate()),
    }
}

pub fn run_example(per_year: usize, max_epochs: usize) -> noxcast::Result<()> {
    let ds = load(per_year)?;
    let split = SplitStrategy::stratified_default(1).apply(&ds)?;
    let config = TrainConfig {
        max_epochs,
        patience: max_epochs.min(100),
        seed: 2,
        ..TrainConfig::default()
    };
    let model = train(&ds, &split, &LayerSpec::default_pair(), &config)?.network;

    let ranking = permutation_importance(&model, &ds, &split, Partition::Validation, 10, 3)?;
    println!("baseline validation R2: {:.4}", ranking.baseline_r_square);
    println!("{:<5}{:<6}{:>10}{:>10}", "rank", "var", "drop", "std");
    for e in &ranking.entries {
        println!("{:<5}{:<6}{:>10.4}{:>10.4}", e.rank, e.variable.name(), e.score, e.std);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400, TrainConfig::default().max_epochs)
}
