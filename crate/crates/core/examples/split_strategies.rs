// Temporal versus year-stratified partitioning, with per-year counts.

use std::path::Path;

use noxcast::dataset::{csv_files_in, load_csv, Dataset, Schema};
use noxcast::synth::SyntheticPlant;
use noxcast::trainer::{largest_remainder, split_stratified, split_temporal, Partition, SplitAssignment};

fn load(per_year: usize) -> noxcast::Result<Dataset> {
    match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => load_csv(&csv_files_in(Path::new(&dir))?, &Schema::public_dataset()),
        None => Ok(SyntheticPlant {
            years: SyntheticPlant::default().years.iter().map(|&(y, n)| (y, n.min(per_year))).collect(),
            ..SyntheticPlant::default()
        }
        .generate()),
    }
}

fn show(ds: &Dataset, split: &SplitAssignment) {
    println!("{}", split.strategy.caption());
    println!("  {:<6}{:>10}{:>12}{:>8}", "year", "training", "validation", "test");
    for (year, idx) in ds.year_index() {
        let mut c = [0usize; 3];
        for &i in idx {
            c[split.labels[i] as usize] += 1;
        }
        println!("  {year:<6}{:>10}{:>12}{:>8}", c[0], c[1], c[2]);
    }
    let t = split.counts();
    println!("  {:<6}{:>10}{:>12}{:>8}", "total", t[0], t[1], t[2]);
}

pub fn run_example(per_year: usize) -> noxcast::Result<()> {
    let ds = load(per_year)?;
    let temporal = split_temporal(&ds, &[2011, 2012, 2013], &[2014], &[2015])?;
    show(&ds, &temporal);
    let stratified = split_stratified(&ds, [0.6, 0.2, 0.2], 1)?;
    show(&ds, &stratified);

    // every year's share is the largest-remainder rounding of its size
    for (year, idx) in ds.year_index() {
        let want = largest_remainder(idx.len(), [0.6, 0.2, 0.2]);
        let got = Partition::ALL.map(|p| idx.iter().filter(|&&i| stratified.labels[i] == p).count());
        assert_eq!(want, got, "{year}");
    }
    println!("split.csv preview:\n{}", stratified.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(usize::MAX)
}
