use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::split::{Partition, SplitAssignment};
use crate::dataset::{Dataset, Predictors, Standardizer};
use crate::error::{Error, Result};
use crate::network::{LayerSpec, Network, Regressor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchMode {
    /// Every training record contributes to every update.
    #[default]
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub seed: u64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
    /// Weight penalty λ; biases are never penalized.
    pub penalty: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Stop as converged once every gradient component is below this.
    pub gradient_tolerance: f64,
    pub batch_mode: BatchMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            learning_rate: 0.01,
            max_epochs: 2000,
            patience: 100,
            penalty: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            gradient_tolerance: 1e-8,
            batch_mode: BatchMode::Full,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if self.max_epochs == 0 {
            return bad("max_epochs must be at least 1");
        }
        if self.patience > self.max_epochs {
            return bad("patience must not exceed max_epochs");
        }
        if !(self.penalty.is_finite() && self.penalty >= 0.0) {
            return bad("penalty must be non-negative");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("beta1 and beta2 must lie in [0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    /// SHA-256 over the configuration and the layer specs.
    pub fn digest(&self, specs: &[LayerSpec]) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("config serializes"));
        h.update(serde_json::to_vec(specs).expect("specs serialize"));
        format!("{:x}", h.finalize())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Converged,
    Patience,
    MaxEpochs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Penalized training loss at the parameters the epoch started from.
    pub train_loss: f64,
    /// Validation SSE after the epoch's update (epoch 0: initial parameters).
    pub validation_sse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub stop_reason: StopReason,
}

impl TrainHistory {
    pub fn best_validation_sse(&self) -> f64 {
        self.epochs[self.best_epoch].validation_sse
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,validation_sse\n");
        for e in &self.epochs {
            out.push_str(&format!("{},{},{}\n", e.epoch, e.train_loss, e.validation_sse));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub network: Network,
    pub history: TrainHistory,
}

fn sse<M: Regressor>(model: &M, xs: &[Predictors], ys: &[f64]) -> f64 {
    model
        .predict_batch(xs)
        .iter()
        .zip(ys)
        .map(|(p, y)| (p - y) * (p - y))
        .sum()
}

/// Full-batch Adam on the penalized squared error with early stopping on
/// validation SSE. The standardizer is fitted on the training partition and
/// the output bias starts at the training mean of the response. Returns the
/// parameters of the epoch with the lowest validation SSE.
pub fn train(dataset: &Dataset, split: &SplitAssignment, specs: &[LayerSpec], config: &TrainConfig) -> Result<Trained> {
    config.validate()?;
    split.check_matches(dataset)?;
    let train_idx = split.indices(Partition::Train);
    let val_idx = split.indices(Partition::Validation);
    if train_idx.is_empty() {
        return Err(Error::EmptyPartition(Partition::Train));
    }
    if val_idx.is_empty() {
        return Err(Error::EmptyPartition(Partition::Validation));
    }
    let records = dataset.records();
    let batch: Vec<(Predictors, f64)> = train_idx.iter().map(|&i| (records[i].values, records[i].nox)).collect();
    let val_x: Vec<Predictors> = val_idx.iter().map(|&i| records[i].values).collect();
    let val_y: Vec<f64> = val_idx.iter().map(|&i| records[i].nox).collect();

    let standardizer = Standardizer::fit(dataset, &train_idx, Partition::Train.name())?;
    let mut net = Network::init(specs, config.seed).with_standardizer(standardizer);
    net.config_digest = config.digest(specs);
    net.output_bias = batch.iter().map(|(_, y)| y).sum::<f64>() / batch.len() as f64;

    let mut params = net.params();
    let mut m = vec![0.0; params.len()];
    let mut v = vec![0.0; params.len()];

    let initial_sse = sse(&net, &val_x, &val_y);
    let mut epochs = vec![EpochRecord {
        epoch: 0,
        train_loss: net.loss(&batch, config.penalty),
        validation_sse: initial_sse,
    }];
    let mut best = (0usize, initial_sse, params.clone());
    let mut stop_reason = StopReason::MaxEpochs;

    for epoch in 1..=config.max_epochs {
        let grad = net.gradient(&batch, config.penalty);
        if !grad.loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        let g = grad.flatten();
        if g.iter().all(|x| x.abs() < config.gradient_tolerance) {
            stop_reason = StopReason::Converged;
            break;
        }

        let t = epoch as i32;
        let bias1 = 1.0 - config.beta1.powi(t);
        let bias2 = 1.0 - config.beta2.powi(t);
        for (((p, gi), mi), vi) in params.iter_mut().zip(&g).zip(&mut m).zip(&mut v) {
            *mi = config.beta1 * *mi + (1.0 - config.beta1) * gi;
            *vi = config.beta2 * *vi + (1.0 - config.beta2) * gi * gi;
            let m_hat = *mi / bias1;
            let v_hat = *vi / bias2;
            *p -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
        }
        net.set_params(&params);

        let val_sse = sse(&net, &val_x, &val_y);
        if !val_sse.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        epochs.push(EpochRecord {
            epoch,
            train_loss: grad.loss,
            validation_sse: val_sse,
        });
        if val_sse < best.1 {
            best = (epoch, val_sse, params.clone());
        } else if epoch - best.0 >= config.patience {
            stop_reason = StopReason::Patience;
            break;
        }
    }

    net.set_params(&best.2);
    Ok(Trained {
        network: net,
        history: TrainHistory {
            epochs,
            best_epoch: best.0,
            stop_reason,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ProcessRecord, Schema};
    use crate::trainer::{evaluate, split_stratified};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn linear_dataset(n: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let records = (0..n)
            .map(|i| {
                let values: Predictors = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
                ProcessRecord {
                    year: 2011 + (i % 5) as i32,
                    values,
                    nox: 0.0,
                }
            })
            .collect::<Vec<_>>();
        // y = 2 * standardized TIT + 1
        let tmp = Dataset::new(records.clone(), Schema::canonical());
        let all: Vec<usize> = (0..n).collect();
        let s = Standardizer::fit(&tmp, &all, "all").unwrap();
        let records = records
            .into_iter()
            .map(|mut r| {
                r.nox = 2.0 * s.apply(&r.values)[5] + 1.0;
                r
            })
            .collect();
        Dataset::new(records, Schema::canonical())
    }

    #[test]
    fn learns_a_linear_target() {
        let ds = linear_dataset(500);
        let split = split_stratified(&ds, [0.6, 0.2, 0.2], 4).unwrap();
        let out = train(&ds, &split, &LayerSpec::default_pair(), &TrainConfig::default()).unwrap();
        let m = evaluate(&out.network, &ds, &split, Partition::Train).unwrap();
        assert!(m.r_square > 0.999, "R² = {}", m.r_square);
    }

    #[test]
    fn deterministic_and_early_stopping_invariant() {
        let ds = linear_dataset(200);
        let split = split_stratified(&ds, [0.6, 0.2, 0.2], 1).unwrap();
        let cfg = TrainConfig {
            max_epochs: 150,
            patience: 20,
            learning_rate: 0.05,
            ..TrainConfig::default()
        };
        let a = train(&ds, &split, &LayerSpec::default_pair(), &cfg).unwrap();
        let b = train(&ds, &split, &LayerSpec::default_pair(), &cfg).unwrap();
        assert_eq!(a.network.params(), b.network.params());
        assert_eq!(a.history, b.history);

        let best = a.history.best_validation_sse();
        assert!(a.history.epochs.iter().all(|e| best <= e.validation_sse));
        let val = evaluate(&a.network, &ds, &split, Partition::Validation).unwrap();
        assert_eq!(val.sse, best);
        assert_eq!(a.network.standardizer.fitted_on, "train");
    }

    #[test]
    fn config_validation() {
        let ok = TrainConfig::default();
        assert!(ok.validate().is_ok());
        assert!(TrainConfig { learning_rate: 0.0, ..ok.clone() }.validate().is_err());
        assert!(TrainConfig { patience: 3000, ..ok.clone() }.validate().is_err());
        assert!(TrainConfig { penalty: -1.0, ..ok.clone() }.validate().is_err());
        let parsed: TrainConfig = serde_json::from_str(r#"{"seed": 4, "max_epochs": 10, "patience": 5}"#).unwrap();
        assert_eq!(parsed.seed, 4);
        assert_eq!(parsed.learning_rate, 0.01);
        assert!(serde_json::from_str::<TrainConfig>(r#"{"lr": 1}"#).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let ds = linear_dataset(100);
        let split = split_stratified(&ds, [0.6, 0.2, 0.2], 1).unwrap();
        let cfg = TrainConfig {
            learning_rate: 1e300,
            max_epochs: 50,
            patience: 50,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(&ds, &split, &LayerSpec::default_pair(), &cfg),
            Err(Error::Diverged { .. })
        ));
    }
}
