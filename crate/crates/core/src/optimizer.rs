//! Desirability functions and box-constrained minimization of the predicted
//! response.
//!
//! The search is a multi-start coordinate pattern search: every coordinate
//! is probed at `x ± step`, projected onto the box; a coordinate whose probes
//! both fail has its step halved. Steps start at 10% of the variable's range
//! and the search ends once every step is below `1e-6` of its range.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Dataset, Predictors, ProcessRecord, N_PREDICTORS};
use crate::error::{Error, Result};
use crate::network::Regressor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxConstraints {
    pub lower: Predictors,
    pub upper: Predictors,
}

impl BoxConstraints {
    pub fn new(lower: Predictors, upper: Predictors) -> Result<Self> {
        for (j, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::Bounds(format!(
                    "{}: lower {l} must be finite and below upper {u}",
                    Column::PREDICTORS[j]
                )));
            }
        }
        Ok(BoxConstraints { lower, upper })
    }

    /// Observed min/max of every predictor.
    pub fn observed(dataset: &Dataset) -> Result<Self> {
        if dataset.is_empty() {
            return Err(Error::TooFewValues { needed: 1, got: 0 });
        }
        let mut lower = [f64::INFINITY; N_PREDICTORS];
        let mut upper = [f64::NEG_INFINITY; N_PREDICTORS];
        for r in dataset.records() {
            for j in 0..N_PREDICTORS {
                lower[j] = lower[j].min(r.values[j]);
                upper[j] = upper[j].max(r.values[j]);
            }
        }
        BoxConstraints::new(lower, upper)
    }

    pub fn range(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn contains(&self, x: &Predictors) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn project(&self, x: &mut Predictors) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Predictors {
        std::array::from_fn(|j| rng.gen_range(self.lower[j]..=self.upper[j]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "target", rename_all = "lowercase")]
pub enum DesirabilityMode {
    Minimize,
    Maximize,
    /// Two-sided, peaking at the target value.
    Target(f64),
}

/// Derringer–Suich desirability on `[low, high]` with shape exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesirabilitySpec {
    pub mode: DesirabilityMode,
    pub low: f64,
    pub high: f64,
    pub exponent: f64,
}

impl DesirabilitySpec {
    pub fn minimize(low: f64, high: f64) -> Result<Self> {
        let spec = DesirabilitySpec {
            mode: DesirabilityMode::Minimize,
            low,
            high,
            exponent: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Minimization over the observed NOx range.
    pub fn minimize_observed(dataset: &Dataset) -> Result<Self> {
        let nox = dataset.column(Column::NOX);
        let low = nox.iter().copied().fold(f64::INFINITY, f64::min);
        let high = nox.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        DesirabilitySpec::minimize(low, high)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite() && self.low < self.high) {
            return Err(Error::Bounds(format!(
                "desirability needs low < high, got [{}, {}]",
                self.low, self.high
            )));
        }
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::Bounds("desirability exponent must be positive".into()));
        }
        if let DesirabilityMode::Target(t) = self.mode {
            if !(self.low < t && t < self.high) {
                return Err(Error::Bounds(format!("target {t} must lie strictly inside [low, high]")));
            }
        }
        Ok(())
    }
}

pub fn desirability(y: f64, spec: &DesirabilitySpec) -> Result<f64> {
    spec.validate()?;
    let (lo, hi, s) = (spec.low, spec.high, spec.exponent);
    let d = match spec.mode {
        DesirabilityMode::Minimize => {
            if y <= lo {
                1.0
            } else if y >= hi {
                0.0
            } else {
                ((hi - y) / (hi - lo)).powf(s)
            }
        }
        DesirabilityMode::Maximize => {
            if y <= lo {
                0.0
            } else if y >= hi {
                1.0
            } else {
                ((y - lo) / (hi - lo)).powf(s)
            }
        }
        DesirabilityMode::Target(t) => {
            if y <= lo || y >= hi {
                0.0
            } else if y <= t {
                ((y - lo) / (t - lo)).powf(s)
            } else {
                ((hi - y) / (hi - t)).powf(s)
            }
        }
    };
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub n_starts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Safety cap on full coordinate sweeps per start.
    pub max_sweeps: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            n_starts: 32,
            seed: 0,
            initial_step: 0.1,
            min_step: 1e-6,
            max_sweeps: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    /// The dataset row with the lowest predicted response.
    BestPredictedRow,
    /// One of the rows with the lowest observed response.
    LowObservedRow,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartTrace {
    pub kind: StartKind,
    pub start: Predictors,
    pub start_value: f64,
    pub final_point: Predictors,
    pub final_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub x_star: Predictors,
    pub predicted_nox: f64,
    pub desirability: f64,
    pub n_starts: usize,
    pub best_start: usize,
    pub trace: Vec<StartTrace>,
}

impl OptimizationResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("start,kind,start_value,final_value,iterations,evaluations");
        for c in Column::PREDICTORS {
            out.push_str(&format!(",start_{c}"));
        }
        for c in Column::PREDICTORS {
            out.push_str(&format!(",final_{c}"));
        }
        out.push('\n');
        for (i, t) in self.trace.iter().enumerate() {
            let kind = serde_json::to_value(t.kind).unwrap();
            out.push_str(&format!(
                "{i},{},{},{},{},{}",
                kind.as_str().unwrap(),
                t.start_value,
                t.final_value,
                t.iterations,
                t.evaluations
            ));
            for v in t.start.iter().chain(&t.final_point) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Start points: half of `n_starts` from observed rows (the best-predicted row
/// first, then the lowest observed responses), the rest uniform in the box.
fn start_points<M: Regressor + ?Sized>(
    model: &M,
    bounds: &BoxConstraints,
    observed: &[ProcessRecord],
    config: &OptimizerConfig,
) -> Vec<(StartKind, Predictors)> {
    let mut starts: Vec<(StartKind, Predictors)> = Vec::with_capacity(config.n_starts);
    let n_observed = if observed.is_empty() { 0 } else { config.n_starts.div_ceil(2) };
    if n_observed > 0 {
        let xs: Vec<Predictors> = observed.iter().map(|r| r.values).collect();
        let preds = model.predict_batch(&xs);
        let best = preds
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("non-empty");
        starts.push((StartKind::BestPredictedRow, xs[best]));

        let mut by_nox: Vec<usize> = (0..observed.len()).collect();
        by_nox.sort_by(|&a, &b| observed[a].nox.total_cmp(&observed[b].nox).then(a.cmp(&b)));
        for i in by_nox {
            if starts.len() >= n_observed {
                break;
            }
            if starts.iter().any(|(_, s)| *s == xs[i]) {
                continue;
            }
            starts.push((StartKind::LowObservedRow, xs[i]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while starts.len() < config.n_starts {
        starts.push((StartKind::Random, bounds.sample(&mut rng)));
    }
    for (_, s) in &mut starts {
        bounds.project(s);
    }
    starts
}

fn pattern_search<M: Regressor + ?Sized>(
    model: &M,
    bounds: &BoxConstraints,
    start: Predictors,
    config: &OptimizerConfig,
) -> (Predictors, f64, usize, usize) {
    let mut x = start;
    let mut fx = model.predict(&x);
    let mut evaluations = 1;
    let ranges: Predictors = std::array::from_fn(|j| bounds.range(j));
    let mut steps: Predictors = std::array::from_fn(|j| config.initial_step * ranges[j]);
    let mut sweeps = 0;

    while sweeps < config.max_sweeps && (0..N_PREDICTORS).any(|j| steps[j] >= config.min_step * ranges[j]) {
        sweeps += 1;
        for j in 0..N_PREDICTORS {
            if steps[j] < config.min_step * ranges[j] {
                continue;
            }
            let mut improved = false;
            for dir in [1.0, -1.0] {
                let mut cand = x;
                cand[j] = (x[j] + dir * steps[j]).clamp(bounds.lower[j], bounds.upper[j]);
                if cand[j] == x[j] {
                    continue;
                }
                debug_assert!(bounds.contains(&cand));
                let fc = model.predict(&cand);
                evaluations += 1;
                if fc < fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
            }
            if !improved {
                steps[j] *= 0.5;
            }
        }
    }
    (x, fx, sweeps, evaluations)
}

/// Multi-start pattern search for the lowest predicted response inside
/// `bounds`. `observed` supplies data-driven start points and may be empty.
pub fn minimize_response<M: Regressor + ?Sized>(
    model: &M,
    bounds: &BoxConstraints,
    observed: &[ProcessRecord],
    desirability_spec: &DesirabilitySpec,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if config.n_starts == 0 {
        return Err(Error::Config("optimizer needs at least one start".into()));
    }
    if !(config.min_step > 0.0 && config.initial_step > config.min_step) {
        return Err(Error::Config("optimizer steps must satisfy 0 < min_step < initial_step".into()));
    }
    desirability_spec.validate()?;

    let trace: Vec<StartTrace> = start_points(model, bounds, observed, config)
        .into_iter()
        .map(|(kind, start)| {
            let start_value = model.predict(&start);
            let (final_point, final_value, iterations, evaluations) = pattern_search(model, bounds, start, config);
            StartTrace {
                kind,
                start,
                start_value,
                final_point,
                final_value,
                iterations,
                evaluations,
            }
        })
        .collect();

    let mut best_start = 0;
    for (i, t) in trace.iter().enumerate() {
        if t.final_value < trace[best_start].final_value {
            best_start = i;
        }
    }
    let best = &trace[best_start];
    Ok(OptimizationResult {
        x_star: best.final_point,
        predicted_nox: best.final_value,
        desirability: desirability(best.final_value, desirability_spec)?,
        n_starts: trace.len(),
        best_start,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> BoxConstraints {
        BoxConstraints::new([0.0; N_PREDICTORS], [1.0; N_PREDICTORS]).unwrap()
    }

    #[test]
    fn desirability_minimize_shape() {
        let s = DesirabilitySpec::minimize(10.0, 20.0).unwrap();
        assert_eq!(desirability(10.0, &s).unwrap(), 1.0);
        assert_eq!(desirability(20.0, &s).unwrap(), 0.0);
        assert_eq!(desirability(5.0, &s).unwrap(), 1.0);
        assert_eq!(desirability(25.0, &s).unwrap(), 0.0);
        assert_eq!(desirability(15.0, &s).unwrap(), 0.5);
        let s2 = DesirabilitySpec { exponent: 2.0, ..s };
        assert_eq!(desirability(15.0, &s2).unwrap(), 0.25);
        let mut prev = 1.0;
        for k in 0..=100 {
            let d = desirability(8.0 + 0.14 * k as f64, &s2).unwrap();
            assert!((0.0..=1.0).contains(&d) && d <= prev);
            prev = d;
        }
    }

    #[test]
    fn desirability_other_modes() {
        let max = DesirabilitySpec {
            mode: DesirabilityMode::Maximize,
            low: 0.0,
            high: 4.0,
            exponent: 1.0,
        };
        assert_eq!(desirability(3.0, &max).unwrap(), 0.75);
        let target = DesirabilitySpec {
            mode: DesirabilityMode::Target(1.0),
            ..max
        };
        assert_eq!(desirability(1.0, &target).unwrap(), 1.0);
        assert_eq!(desirability(2.5, &target).unwrap(), 0.5);
        assert_eq!(desirability(0.5, &target).unwrap(), 0.5);
    }

    #[test]
    fn desirability_invalid_bounds() {
        assert!(DesirabilitySpec::minimize(5.0, 5.0).is_err());
        let bad = DesirabilitySpec {
            mode: DesirabilityMode::Minimize,
            low: 0.0,
            high: 1.0,
            exponent: 0.0,
        };
        assert!(desirability(0.5, &bad).is_err());
    }

    #[test]
    fn bowl_minimum_is_recovered() {
        let c: Predictors = [0.13, 0.5, 0.77, 0.01, 0.99, 0.42, 0.3, 0.6, 0.25];
        let bowl = move |x: &Predictors| x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let spec = DesirabilitySpec::minimize(0.0, 1.0).unwrap();
        let cfg = OptimizerConfig {
            n_starts: 4,
            seed: 3,
            ..OptimizerConfig::default()
        };
        let res = minimize_response(&bowl, &unit_box(), &[], &spec, &cfg).unwrap();
        for (x, t) in res.x_star.iter().zip(&c) {
            assert!((x - t).abs() < 1e-4, "{x} vs {t}");
        }
        assert!(res.trace.iter().all(|t| res.predicted_nox <= t.final_value));
        assert!(res.trace.iter().all(|t| t.kind == StartKind::Random));
    }

    #[test]
    fn minimum_on_the_boundary() {
        let slope = |x: &Predictors| x.iter().sum::<f64>();
        let spec = DesirabilitySpec::minimize(0.0, 9.0).unwrap();
        let res = minimize_response(&slope, &unit_box(), &[], &spec, &OptimizerConfig { n_starts: 2, ..Default::default() }).unwrap();
        assert!(res.x_star.iter().all(|&v| v == 0.0));
        assert_eq!(res.desirability, 1.0);
    }

    #[test]
    fn constant_model_and_determinism() {
        let constant = |_: &Predictors| 7.5;
        let spec = DesirabilitySpec::minimize(0.0, 10.0).unwrap();
        let cfg = OptimizerConfig { n_starts: 3, seed: 9, ..Default::default() };
        let a = minimize_response(&constant, &unit_box(), &[], &spec, &cfg).unwrap();
        assert_eq!(a.predicted_nox, 7.5);
        assert!(unit_box().contains(&a.x_star));
        assert_eq!(a.best_start, 0);
        let b = minimize_response(&constant, &unit_box(), &[], &spec, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn observed_starts_come_first() {
        let rows: Vec<ProcessRecord> = (0..10)
            .map(|i| ProcessRecord {
                year: 2011,
                values: [i as f64 / 10.0; N_PREDICTORS],
                nox: 10.0 - i as f64,
            })
            .collect();
        let model = |x: &Predictors| (x[0] - 0.35).abs();
        let starts = start_points(&model, &unit_box(), &rows, &OptimizerConfig { n_starts: 6, ..Default::default() });
        assert_eq!(starts.len(), 6);
        assert_eq!(starts[0], (StartKind::BestPredictedRow, [0.3; N_PREDICTORS]));
        assert_eq!(starts[1], (StartKind::LowObservedRow, [0.9; N_PREDICTORS]));
        assert_eq!(starts[2].0, StartKind::LowObservedRow);
        assert!(starts[3..].iter().all(|s| s.0 == StartKind::Random));
    }

    #[test]
    fn invalid_box() {
        let mut upper = [1.0; N_PREDICTORS];
        upper[4] = 0.0;
        assert!(matches!(BoxConstraints::new([0.0; N_PREDICTORS], upper), Err(Error::Bounds(_))));
    }
}
