//! Partitioning, training and the fit-metric suite.

mod metrics;
mod split;
mod train;

pub use metrics::{evaluate, neg_log_likelihood, partition_rows, rmse, MetricsReport};
pub use split::{
    largest_remainder, split_stratified, split_temporal, validate_fractions, Partition, SplitAssignment,
    SplitStrategy,
};
pub use train::{train, BatchMode, EpochRecord, StopReason, TrainConfig, TrainHistory, Trained};
