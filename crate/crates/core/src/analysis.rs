//! Post-training diagnostics: residuals, permutation importance and
//! one-variable prediction profiles.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Dataset, Predictors, N_PREDICTORS};
use crate::error::{Error, Result};
use crate::network::Regressor;
use crate::stats::median;
use crate::trainer::{partition_rows, MetricsReport, Partition, SplitAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub actual: f64,
    pub predicted: f64,
    /// `actual − predicted`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualTable {
    pub partition: Partition,
    pub rows: Vec<ResidualRow>,
}

impl ResidualTable {
    pub fn mean_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).sum::<f64>() / self.rows.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("actual,predicted,residual\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.actual, r.predicted, r.residual));
        }
        out
    }
}

pub fn residual_table<M: Regressor + ?Sized>(
    model: &M,
    dataset: &Dataset,
    split: &SplitAssignment,
    partition: Partition,
) -> Result<ResidualTable> {
    split.check_matches(dataset)?;
    let (xs, ys) = partition_rows(dataset, split, partition);
    if xs.is_empty() {
        return Err(Error::EmptyPartition(partition));
    }
    let preds = model.predict_batch(&xs);
    let rows = ys
        .iter()
        .zip(&preds)
        .map(|(&actual, &predicted)| ResidualRow {
            actual,
            predicted,
            residual: actual - predicted,
        })
        .collect();
    Ok(ResidualTable { partition, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceEntry {
    pub variable: Column,
    /// Mean drop in R² over the permutations.
    pub score: f64,
    /// Sample standard deviation of the drop (0 for a single permutation).
    pub std: f64,
    /// 1 = most important.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceRanking {
    pub partition: Partition,
    pub baseline_r_square: f64,
    pub repeats: usize,
    pub seed: u64,
    /// Sorted by descending score.
    pub entries: Vec<ImportanceEntry>,
}

impl ImportanceRanking {
    pub fn rank_of(&self, variable: Column) -> Option<usize> {
        self.entries.iter().find(|e| e.variable == variable).map(|e| e.rank)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("variable,score,std,rank\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{},{}\n", e.variable, e.score, e.std, e.rank));
        }
        out
    }
}

fn cmp_rows(a: &(Predictors, f64), b: &(Predictors, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Permutation importance on one partition of a dataset.
pub fn permutation_importance<M: Regressor + ?Sized>(
    model: &M,
    dataset: &Dataset,
    split: &SplitAssignment,
    partition: Partition,
    repeats: usize,
    seed: u64,
) -> Result<ImportanceRanking> {
    split.check_matches(dataset)?;
    let (xs, ys) = partition_rows(dataset, split, partition);
    let rows: Vec<(Predictors, f64)> = xs.into_iter().zip(ys).collect();
    permutation_importance_rows(model, &rows, partition, repeats, seed)
}

/// Score of variable `j` = baseline R² − mean R² over `repeats` shuffles of
/// column `j`. Rows are put in a canonical order first, so the result does
/// not depend on how they were supplied. Shuffle `r` of variable `j` draws
/// from ChaCha8 stream `(j << 32) | r` of `seed`.
pub fn permutation_importance_rows<M: Regressor + ?Sized>(
    model: &M,
    rows: &[(Predictors, f64)],
    partition: Partition,
    repeats: usize,
    seed: u64,
) -> Result<ImportanceRanking> {
    if repeats == 0 {
        return Err(Error::Config("permutation repeats must be at least 1".into()));
    }
    if rows.is_empty() {
        return Err(Error::EmptyPartition(partition));
    }
    let mut rows = rows.to_vec();
    rows.sort_by(cmp_rows);
    let xs: Vec<Predictors> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();

    let baseline = MetricsReport::from_predictions(partition, &ys, &model.predict_batch(&xs))?.r_square;

    let mut entries = Vec::with_capacity(N_PREDICTORS);
    let mut permuted = xs.clone();
    for (j, &variable) in Column::PREDICTORS.iter().enumerate() {
        let mut drops = Vec::with_capacity(repeats);
        for r in 0..repeats {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((j as u64) << 32) | r as u64);
            let mut column: Vec<f64> = xs.iter().map(|x| x[j]).collect();
            column.shuffle(&mut rng);
            for (p, v) in permuted.iter_mut().zip(&column) {
                p[j] = *v;
            }
            let r2 = MetricsReport::from_predictions(partition, &ys, &model.predict_batch(&permuted))?.r_square;
            drops.push(baseline - r2);
        }
        for (p, x) in permuted.iter_mut().zip(&xs) {
            p[j] = x[j];
        }
        let k = drops.len() as f64;
        let score = drops.iter().sum::<f64>() / k;
        let std = if drops.len() > 1 {
            (drops.iter().map(|d| (d - score) * (d - score)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        entries.push(ImportanceEntry {
            variable,
            score,
            std,
            rank: 0,
        });
    }
    // stable: ties keep canonical variable order
    entries.sort_by(|a, b| b.score.total_cmp(&a.score));
    for (i, e) in entries.iter_mut().enumerate() {
        e.rank = i + 1;
    }
    Ok(ImportanceRanking {
        partition,
        baseline_r_square: baseline,
        repeats,
        seed,
        entries,
    })
}

/// Values of the other variables while one is swept.
#[derive(Debug, Clone, PartialEq)]
pub enum BasePoint {
    /// Per-variable medians over the dataset.
    Medians,
    Explicit(Predictors),
}

impl BasePoint {
    pub fn resolve(&self, dataset: &Dataset) -> Result<Predictors> {
        match self {
            BasePoint::Explicit(x) => Ok(*x),
            BasePoint::Medians => {
                let mut base = [0.0; N_PREDICTORS];
                for (b, &c) in base.iter_mut().zip(&Column::PREDICTORS) {
                    *b = median(&dataset.column(c))?;
                }
                Ok(base)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub variable: Column,
    pub grid: Vec<f64>,
    pub predictions: Vec<f64>,
    pub base: Predictors,
}

impl ProfileCurve {
    /// Inputs the curve was evaluated at.
    pub fn inputs(&self) -> Vec<Predictors> {
        let j = self.variable.predictor_index().expect("profile variable is a predictor");
        self.grid
            .iter()
            .map(|&g| {
                let mut x = self.base;
                x[j] = g;
                x
            })
            .collect()
    }

    /// `max − min` of the predictions.
    pub fn range(&self) -> f64 {
        let lo = self.predictions.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.predictions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},predicted_NOX\n", self.variable);
        for (g, p) in self.grid.iter().zip(&self.predictions) {
            out.push_str(&format!("{g},{p}\n"));
        }
        out
    }
}

/// Evenly spaced sweep of `variable` over its observed range with the other
/// predictors held at `base`.
pub fn profile<M: Regressor + ?Sized>(
    model: &M,
    dataset: &Dataset,
    variable: Column,
    base: &BasePoint,
    grid_n: usize,
) -> Result<ProfileCurve> {
    let j = variable
        .predictor_index()
        .ok_or_else(|| Error::UnknownVariable(format!("{variable} is the response, not a process variable")))?;
    if grid_n < 2 {
        return Err(Error::Config("profile grid needs at least 2 points".into()));
    }
    if dataset.is_empty() {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    let values = dataset.column(variable);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::ConstantColumn(variable.name().to_string()));
    }
    let step = (hi - lo) / (grid_n - 1) as f64;
    let mut grid: Vec<f64> = (0..grid_n).map(|i| lo + step * i as f64).collect();
    grid[grid_n - 1] = hi;

    let mut curve = ProfileCurve {
        variable,
        grid,
        predictions: Vec::new(),
        base: base.resolve(dataset)?,
    };
    debug_assert_eq!(curve.inputs()[0][j], lo);
    curve.predictions = model.predict_batch(&curve.inputs());
    Ok(curve)
}

/// [`profile`] with the variable given by name.
pub fn profile_named<M: Regressor + ?Sized>(
    model: &M,
    dataset: &Dataset,
    variable: &str,
    base: &BasePoint,
    grid_n: usize,
) -> Result<ProfileCurve> {
    let column: Column = variable.parse()?;
    profile(model, dataset, column, base, grid_n)
}
