//! Mixed-activation feed-forward regression network.
//!
//! Inputs are the nine raw process variables; the network z-scores them with
//! its own [`Standardizer`], passes them through dense hidden layers whose
//! nodes each carry their own activation, and ends in a single linear output
//! expressed in the response's raw units (mg/m³).
//!
//! The default architecture has two hidden layers of five nodes: three `TanH`,
//! one `Linear` and one `Gaussian` each.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Predictors, Standardizer, N_PREDICTORS};
use crate::error::{Error, Result};

/// Anything that maps a raw predictor vector to a response.
pub trait Regressor {
    fn predict(&self, x: &Predictors) -> f64;

    fn predict_batch(&self, xs: &[Predictors]) -> Vec<f64> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

impl<F> Regressor for F
where
    F: Fn(&Predictors) -> f64,
{
    fn predict(&self, x: &Predictors) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Activation {
    TanH,
    Linear,
    Gaussian,
}

impl Activation {
    #[inline]
    pub fn apply(self, u: f64) -> f64 {
        match self {
            Activation::TanH => u.tanh(),
            Activation::Linear => u,
            Activation::Gaussian => (-u * u).exp(),
        }
    }

    /// Derivative at `u`, given `out = apply(u)`.
    #[inline]
    pub fn derivative(self, u: f64, out: f64) -> f64 {
        match self {
            Activation::TanH => 1.0 - out * out,
            Activation::Linear => 1.0,
            Activation::Gaussian => -2.0 * u * out,
        }
    }
}

/// Activations of one hidden layer, one per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub activations: Vec<Activation>,
}

impl LayerSpec {
    /// Three `TanH`, one `Linear`, one `Gaussian`.
    pub fn mixed() -> Self {
        use Activation::*;
        LayerSpec {
            activations: vec![TanH, TanH, TanH, Linear, Gaussian],
        }
    }

    /// The two-layer architecture used throughout the crate.
    pub fn default_pair() -> [LayerSpec; 2] {
        [LayerSpec::mixed(), LayerSpec::mixed()]
    }

    pub fn width(&self) -> usize {
        self.activations.len()
    }
}

/// Dense layer with per-node activations. `weights` is row-major,
/// `width × n_inputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub activations: Vec<Activation>,
    pub n_inputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl DenseLayer {
    pub fn zeros(spec: &LayerSpec, n_inputs: usize) -> Self {
        DenseLayer {
            activations: spec.activations.clone(),
            n_inputs,
            weights: vec![0.0; spec.width() * n_inputs],
            biases: vec![0.0; spec.width()],
        }
    }

    pub fn width(&self) -> usize {
        self.activations.len()
    }

    #[inline]
    pub fn weight(&self, node: usize, input: usize) -> f64 {
        self.weights[node * self.n_inputs + input]
    }

    #[inline]
    pub fn weight_mut(&mut self, node: usize, input: usize) -> &mut f64 {
        &mut self.weights[node * self.n_inputs + input]
    }

    #[inline]
    fn forward_into(&self, input: &[f64], pre: &mut [f64], post: &mut [f64]) {
        for (j, act) in self.activations.iter().enumerate() {
            let row = &self.weights[j * self.n_inputs..(j + 1) * self.n_inputs];
            let mut u = self.biases[j];
            for (w, a) in row.iter().zip(input) {
                u += w * a;
            }
            pre[j] = u;
            post[j] = act.apply(u);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub hidden: Vec<DenseLayer>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
    pub standardizer: Standardizer,
    pub seed: u64,
    /// Digest of the training configuration, empty for untrained networks.
    pub config_digest: String,
}

/// Per-node values of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    pub standardized: Predictors,
    /// Pre-activation sums per hidden layer.
    pub pre: Vec<Vec<f64>>,
    /// Node outputs per hidden layer.
    pub post: Vec<Vec<f64>>,
    pub output: f64,
}

/// Gradient of the penalized loss, shaped like the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub hidden_weights: Vec<Vec<f64>>,
    pub hidden_biases: Vec<Vec<f64>>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
    pub loss: f64,
}

impl Gradient {
    /// Flattened in [`Network::params`] order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.hidden_weights.iter().zip(&self.hidden_biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out.extend_from_slice(&self.output_weights);
        out.push(self.output_bias);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.flatten().iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

/// Reusable buffers for forward and backward passes.
struct Scratch {
    input: Vec<f64>,
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
    delta: Vec<Vec<f64>>,
}

impl Scratch {
    fn new(net: &Network) -> Self {
        let widths: Vec<usize> = net.hidden.iter().map(DenseLayer::width).collect();
        Scratch {
            input: vec![0.0; N_PREDICTORS],
            pre: widths.iter().map(|&w| vec![0.0; w]).collect(),
            post: widths.iter().map(|&w| vec![0.0; w]).collect(),
            delta: widths.iter().map(|&w| vec![0.0; w]).collect(),
        }
    }
}

impl Network {
    /// Zero weights and biases with an identity standardizer.
    pub fn zeros(specs: &[LayerSpec]) -> Self {
        let mut hidden = Vec::with_capacity(specs.len());
        let mut n_in = N_PREDICTORS;
        for spec in specs {
            hidden.push(DenseLayer::zeros(spec, n_in));
            n_in = spec.width();
        }
        Network {
            hidden,
            output_weights: vec![0.0; n_in],
            output_bias: 0.0,
            standardizer: Standardizer::identity(),
            seed: 0,
            config_digest: String::new(),
        }
    }

    /// Weights uniform in ±1/√fan_in from a ChaCha8 stream seeded with
    /// `seed`, drawn layer by layer in row-major order; biases zero.
    pub fn init(specs: &[LayerSpec], seed: u64) -> Self {
        let mut net = Network::zeros(specs);
        net.seed = seed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for layer in &mut net.hidden {
            let bound = 1.0 / (layer.n_inputs as f64).sqrt();
            for w in &mut layer.weights {
                *w = rng.gen_range(-bound..=bound);
            }
        }
        let bound = 1.0 / (net.output_weights.len() as f64).sqrt();
        for w in &mut net.output_weights {
            *w = rng.gen_range(-bound..=bound);
        }
        net
    }

    pub fn with_standardizer(mut self, standardizer: Standardizer) -> Self {
        self.standardizer = standardizer;
        self
    }

    pub fn layer_specs(&self) -> Vec<LayerSpec> {
        self.hidden
            .iter()
            .map(|l| LayerSpec {
                activations: l.activations.clone(),
            })
            .collect()
    }

    #[inline]
    fn eval(&self, x: &Predictors, s: &mut Scratch) -> f64 {
        let z = self.standardizer.apply(x);
        s.input.copy_from_slice(&z);
        for (l, layer) in self.hidden.iter().enumerate() {
            let (before, after) = s.post.split_at_mut(l);
            let input: &[f64] = if l == 0 { &s.input } else { &before[l - 1] };
            layer.forward_into(input, &mut s.pre[l], &mut after[0]);
        }
        let last: &[f64] = s.post.last().map(Vec::as_slice).unwrap_or(&s.input);
        let mut y = self.output_bias;
        for (w, a) in self.output_weights.iter().zip(last) {
            y += w * a;
        }
        y
    }

    /// Forward pass that keeps every node's pre- and post-activation value.
    pub fn forward(&self, x: &Predictors) -> ForwardTrace {
        let mut s = Scratch::new(self);
        let output = self.eval(x, &mut s);
        ForwardTrace {
            standardized: self.standardizer.apply(x),
            pre: s.pre,
            post: s.post,
            output,
        }
    }

    /// Gradient of `½·Σ(ŷ − y)² + λ·Σw²` over `batch`; biases are not penalized.
    pub fn gradient(&self, batch: &[(Predictors, f64)], penalty: f64) -> Gradient {
        let mut s = Scratch::new(self);
        let mut gw: Vec<Vec<f64>> = self.hidden.iter().map(|l| vec![0.0; l.weights.len()]).collect();
        let mut gb: Vec<Vec<f64>> = self.hidden.iter().map(|l| vec![0.0; l.width()]).collect();
        let mut gow = vec![0.0; self.output_weights.len()];
        let mut gob = 0.0;
        let mut loss = 0.0;
        let n_layers = self.hidden.len();

        for (x, y) in batch {
            let r = self.eval(x, &mut s) - y;
            loss += 0.5 * r * r;
            gob += r;
            {
                let last: &[f64] = s.post.last().map(Vec::as_slice).unwrap_or(&s.input);
                for (g, a) in gow.iter_mut().zip(last) {
                    *g += r * a;
                }
            }
            if n_layers == 0 {
                continue;
            }

            let top = n_layers - 1;
            for (j, act) in self.hidden[top].activations.iter().enumerate() {
                s.delta[top][j] = r * self.output_weights[j] * act.derivative(s.pre[top][j], s.post[top][j]);
            }
            for l in (0..n_layers).rev() {
                let layer = &self.hidden[l];
                let input: &[f64] = if l == 0 { &s.input } else { &s.post[l - 1] };
                let n_in = layer.n_inputs;
                for j in 0..layer.width() {
                    let d = s.delta[l][j];
                    gb[l][j] += d;
                    let row = &mut gw[l][j * n_in..(j + 1) * n_in];
                    for (g, a) in row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
                if l > 0 {
                    let (lower, upper) = s.delta.split_at_mut(l);
                    let below = &mut lower[l - 1];
                    let prev = &self.hidden[l - 1];
                    for (i, act) in prev.activations.iter().enumerate() {
                        let mut back = 0.0;
                        for (j, d) in upper[0].iter().enumerate() {
                            back += layer.weight(j, i) * d;
                        }
                        below[i] = back * act.derivative(s.pre[l - 1][i], s.post[l - 1][i]);
                    }
                }
            }
        }

        if penalty != 0.0 {
            for (g, layer) in gw.iter_mut().zip(&self.hidden) {
                for (gi, w) in g.iter_mut().zip(&layer.weights) {
                    *gi += 2.0 * penalty * w;
                    loss += penalty * w * w;
                }
            }
            for (gi, w) in gow.iter_mut().zip(&self.output_weights) {
                *gi += 2.0 * penalty * w;
                loss += penalty * w * w;
            }
        }

        Gradient {
            hidden_weights: gw,
            hidden_biases: gb,
            output_weights: gow,
            output_bias: gob,
            loss,
        }
    }

    /// Penalized loss without the gradient.
    pub fn loss(&self, batch: &[(Predictors, f64)], penalty: f64) -> f64 {
        let mut s = Scratch::new(self);
        let mut loss = 0.0;
        for (x, y) in batch {
            let r = self.eval(x, &mut s) - y;
            loss += 0.5 * r * r;
        }
        if penalty != 0.0 {
            let sq: f64 = self
                .hidden
                .iter()
                .flat_map(|l| l.weights.iter())
                .chain(&self.output_weights)
                .map(|w| w * w)
                .sum();
            loss += penalty * sq;
        }
        loss
    }

    pub fn n_params(&self) -> usize {
        self.hidden
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum::<usize>()
            + self.output_weights.len()
            + 1
    }

    /// All parameters: per hidden layer weights then biases, then output
    /// weights and output bias.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for l in &self.hidden {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out.extend_from_slice(&self.output_weights);
        out.push(self.output_bias);
        out
    }

    pub fn set_params(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.n_params(), "parameter vector length");
        let mut rest = params;
        for l in &mut self.hidden {
            let (w, r) = rest.split_at(l.weights.len());
            l.weights.copy_from_slice(w);
            let (b, r) = r.split_at(l.biases.len());
            l.biases.copy_from_slice(b);
            rest = r;
        }
        let (w, r) = rest.split_at(self.output_weights.len());
        self.output_weights.copy_from_slice(w);
        self.output_bias = r[0];
    }

    pub fn validate(&self) -> Result<()> {
        let mut n_in = N_PREDICTORS;
        for (i, l) in self.hidden.iter().enumerate() {
            if l.width() == 0 {
                return Err(Error::Model(format!("hidden layer {i} has no nodes")));
            }
            if l.n_inputs != n_in || l.weights.len() != l.width() * n_in || l.biases.len() != l.width() {
                return Err(Error::Model(format!("hidden layer {i} has inconsistent shape")));
            }
            n_in = l.width();
        }
        if self.output_weights.len() != n_in {
            return Err(Error::Model(format!(
                "output layer expects {n_in} weights, has {}",
                self.output_weights.len()
            )));
        }
        if !self.params().iter().all(|p| p.is_finite()) {
            return Err(Error::Model("non-finite parameter".into()));
        }
        self.standardizer.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from(self)).expect("model serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, ModelLoadError> {
        let file: ModelFile = serde_json::from_str(text).map_err(ModelLoadError::Json)?;
        file.into_network().map_err(ModelLoadError::Invalid)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Network::from_json(&text).map_err(|e| match e {
            ModelLoadError::Json(source) => Error::Json {
                path: path.to_path_buf(),
                source,
            },
            ModelLoadError::Invalid(e) => e,
        })
    }
}

impl Regressor for Network {
    fn predict(&self, x: &Predictors) -> f64 {
        let mut s = Scratch::new(self);
        self.eval(x, &mut s)
    }

    fn predict_batch(&self, xs: &[Predictors]) -> Vec<f64> {
        let mut s = Scratch::new(self);
        xs.iter().map(|x| self.eval(x, &mut s)).collect()
    }
}

#[derive(Debug)]
pub enum ModelLoadError {
    Json(serde_json::Error),
    Invalid(Error),
}

impl std::fmt::Display for ModelLoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelLoadError::Json(e) => write!(f, "{e}"),
            ModelLoadError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

pub const MODEL_FORMAT: &str = "noxcast-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    predictors: Vec<Column>,
    hidden_layers: Vec<LayerFile>,
    output: OutputFile,
    standardizer: Standardizer,
    seed: u64,
    config_digest: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayerFile {
    activations: Vec<Activation>,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OutputFile {
    weights: Vec<f64>,
    bias: f64,
}

impl From<&Network> for ModelFile {
    fn from(net: &Network) -> Self {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            predictors: Column::PREDICTORS.to_vec(),
            hidden_layers: net
                .hidden
                .iter()
                .map(|l| LayerFile {
                    activations: l.activations.clone(),
                    weights: l.weights.chunks(l.n_inputs).map(<[f64]>::to_vec).collect(),
                    biases: l.biases.clone(),
                })
                .collect(),
            output: OutputFile {
                weights: net.output_weights.clone(),
                bias: net.output_bias,
            },
            standardizer: net.standardizer.clone(),
            seed: net.seed,
            config_digest: net.config_digest.clone(),
        }
    }
}

impl ModelFile {
    fn into_network(self) -> Result<Network> {
        if self.format != MODEL_FORMAT || self.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model format {} v{}",
                self.format, self.version
            )));
        }
        if self.predictors != Column::PREDICTORS {
            return Err(Error::Model("predictor order does not match".into()));
        }
        let mut hidden = Vec::with_capacity(self.hidden_layers.len());
        let mut n_in = N_PREDICTORS;
        for (i, l) in self.hidden_layers.into_iter().enumerate() {
            if l.weights.len() != l.activations.len() || l.weights.iter().any(|r| r.len() != n_in) {
                return Err(Error::Model(format!("hidden layer {i} weight matrix has wrong shape")));
            }
            let width = l.activations.len();
            hidden.push(DenseLayer {
                activations: l.activations,
                n_inputs: n_in,
                weights: l.weights.concat(),
                biases: l.biases,
            });
            n_in = width;
        }
        let net = Network {
            hidden,
            output_weights: self.output.weights,
            output_bias: self.output.bias,
            standardizer: self.standardizer,
            seed: self.seed,
            config_digest: self.config_digest,
        };
        net.validate()?;
        Ok(net)
    }
}
