use serde::{Deserialize, Serialize};

use super::split::{Partition, SplitAssignment};
use crate::dataset::{Dataset, Predictors};
use crate::error::{Error, Result};
use crate::network::Regressor;

/// Fit measures for one partition, named as in the classic fit-summary tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub partition: Partition,
    #[serde(rename = "RSquare")]
    pub r_square: f64,
    #[serde(rename = "RMSE")]
    pub rmse: f64,
    #[serde(rename = "Mean Abs Dev")]
    pub mean_abs_dev: f64,
    #[serde(rename = "-LogLikelihood")]
    pub neg_log_likelihood: f64,
    #[serde(rename = "SSE")]
    pub sse: f64,
    #[serde(rename = "Sum Freq")]
    pub sum_freq: usize,
}

/// `√(SSE / n)`.
pub fn rmse(n: usize, sse: f64) -> f64 {
    (sse / n as f64).sqrt()
}

/// Gaussian negative log-likelihood at the maximum-likelihood variance
/// `SSE / n`: `(n/2)·(ln 2π + ln(SSE/n) + 1)`.
pub fn neg_log_likelihood(n: usize, sse: f64) -> f64 {
    let n = n as f64;
    0.5 * n * ((2.0 * std::f64::consts::PI).ln() + (sse / n).ln() + 1.0)
}

impl MetricsReport {
    pub fn from_predictions(partition: Partition, actual: &[f64], predicted: &[f64]) -> Result<Self> {
        assert_eq!(actual.len(), predicted.len());
        let n = actual.len();
        if n == 0 {
            return Err(Error::EmptyPartition(partition));
        }
        let mean = actual.iter().sum::<f64>() / n as f64;
        let sst: f64 = actual.iter().map(|y| (y - mean) * (y - mean)).sum();
        if sst == 0.0 {
            return Err(Error::ZeroVariance(partition));
        }
        let mut sse = 0.0;
        let mut sad = 0.0;
        for (y, p) in actual.iter().zip(predicted) {
            let r = y - p;
            sse += r * r;
            sad += r.abs();
        }
        Ok(MetricsReport {
            partition,
            r_square: 1.0 - sse / sst,
            rmse: rmse(n, sse),
            mean_abs_dev: sad / n as f64,
            neg_log_likelihood: neg_log_likelihood(n, sse),
            sse,
            sum_freq: n,
        })
    }
}

/// Predictor rows and responses of one partition, in ordinal order.
pub fn partition_rows(dataset: &Dataset, split: &SplitAssignment, partition: Partition) -> (Vec<Predictors>, Vec<f64>) {
    split
        .indices(partition)
        .into_iter()
        .map(|i| {
            let r = &dataset.records()[i];
            (r.values, r.nox)
        })
        .unzip()
}

pub fn evaluate<M: Regressor + ?Sized>(
    model: &M,
    dataset: &Dataset,
    split: &SplitAssignment,
    partition: Partition,
) -> Result<MetricsReport> {
    split.check_matches(dataset)?;
    let (xs, ys) = partition_rows(dataset, split, partition);
    let preds = model.predict_batch(&xs);
    MetricsReport::from_predictions(partition, &ys, &preds)
}
