// Trains the 9-5-5-1 network under both split strategies and prints the
// fit table for each partition.
//
// Uses the real yearly CSV files when `NOXCAST_DATA` points at their
// directory, synthetic data otherwise.

use std::path::Path;

use noxcast::dataset::{csv_files_in, load_csv, Dataset, Schema};
use noxcast::network::LayerSpec;
use noxcast::synth::SyntheticPlant;
use noxcast::trainer::{evaluate, train, Partition, SplitStrategy, TrainConfig};

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => {
            let paths = csv_files_in(Path::new(&dir))?;
            load_csv(&paths, &Schema::public_dataset())
        }
        None => Ok(SyntheticPlant::small(per_year, 7).generate()),
    }
}

pub fn run_example(per_year: usize, max_epochs: usize) -> noxcast::Result<()> {
    let ds = load(per_year)?;
    let config = TrainConfig {
        max_epochs,
        patience: max_epochs.min(100),
        seed: 2,
        ..TrainConfig::default()
    };
    for strategy in [SplitStrategy::temporal_default(), SplitStrategy::stratified_default(1)] {
        let split = strategy.apply(&ds)?;
        let trained = train(&ds, &split, &LayerSpec::default_pair(), &config)?;
        println!("{}", strategy.caption());
        println!(
            "  stopped at epoch {} ({:?}), best epoch {}",
            trained.history.epochs.len() - 1,
            trained.history.stop_reason,
            trained.history.best_epoch
        );
        println!("  {:<11}{:>9}{:>9}{:>9}{:>14}", "partition", "R2", "RMSE", "MAD", "-LogLik");
        for p in Partition::ALL {
            let m = evaluate(&trained.network, &ds, &split, p)?;
            println!(
                "  {:<11}{:>9.4}{:>9.4}{:>9.4}{:>14.1}",
                p.title(),
                m.r_square,
                m.rmse,
                m.mean_abs_dev,
                m.neg_log_likelihood
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400, TrainConfig::default().max_epochs)
}
