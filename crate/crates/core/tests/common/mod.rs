//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use noxcast::dataset::{Predictors, Standardizer};
use noxcast::network::{Activation, LayerSpec, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Typical raw operating ranges, used to draw realistic inputs.
pub const RAW_RANGES: [(f64, f64); 9] = [
    (-6.2, 37.1),
    (985.9, 1036.6),
    (24.1, 100.2),
    (2.09, 7.61),
    (17.7, 40.7),
    (1000.9, 1100.9),
    (511.0, 550.6),
    (100.0, 179.5),
    (9.85, 15.16),
];

pub fn random_input(rng: &mut impl Rng) -> Predictors {
    std::array::from_fn(|j| rng.gen_range(RAW_RANGES[j].0..=RAW_RANGES[j].1))
}

/// Default architecture with random weights, biases and standardizer.
pub fn random_network(rng: &mut impl Rng) -> Network {
    let mut net = Network::init(&LayerSpec::default_pair(), rng.gen());
    for layer in &mut net.hidden {
        for w in &mut layer.weights {
            *w = rng.gen_range(-1.0..1.0);
        }
        for b in &mut layer.biases {
            *b = rng.gen_range(-0.5..0.5);
        }
    }
    for w in &mut net.output_weights {
        *w = rng.gen_range(-2.0..2.0);
    }
    net.output_bias = rng.gen_range(-1.0..1.0);
    let means = std::array::from_fn(|j| (RAW_RANGES[j].0 + RAW_RANGES[j].1) / 2.0);
    let stds = std::array::from_fn(|j| (RAW_RANGES[j].1 - RAW_RANGES[j].0) / 4.0 * rng.gen_range(0.5..1.5));
    net.with_standardizer(Standardizer {
        means,
        stds,
        fitted_on: "random".into(),
    })
}

fn activate(a: Activation, u: f64) -> f64 {
    match a {
        Activation::TanH => (2.0 * u).exp_m1() / ((2.0 * u).exp() + 1.0),
        Activation::Linear => u,
        Activation::Gaussian => (-u * u).exp(),
    }
}

/// Straightforward forward pass written from the model definition.
pub fn reference_forward(net: &Network, x: &Predictors) -> f64 {
    let mut a: Vec<f64> = (0..9)
        .map(|j| (x[j] - net.standardizer.means[j]) / net.standardizer.stds[j])
        .collect();
    for layer in &net.hidden {
        let mut next = Vec::new();
        for node in 0..layer.width() {
            let mut u = layer.biases[node];
            for (i, ai) in a.iter().enumerate() {
                u += layer.weight(node, i) * ai;
            }
            next.push(activate(layer.activations[node], u));
        }
        a = next;
    }
    net.output_bias + net.output_weights.iter().zip(&a).map(|(w, v)| w * v).sum::<f64>()
}

/// Relative difference with a floor on the denominator, so that pairs of
/// near-zero derivatives are compared absolutely.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(floor)
}

pub const GRADIENT_STEP: f64 = 1e-6;
pub const GRADIENT_FLOOR: f64 = 1e-4;

/// Largest relative error between the analytic gradient and central
/// differences of the loss over `trials` random networks and batches.
pub fn gradient_check(trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let net = random_network(&mut rng);
        let n = rng.gen_range(1..=8);
        let batch: Vec<(Predictors, f64)> = (0..n)
            .map(|_| {
                let x = random_input(&mut rng);
                let y = reference_forward(&net, &x) + rng.gen_range(-3.0..3.0);
                (x, y)
            })
            .collect();
        let penalty = if rng.gen_bool(0.5) { 1e-4 } else { rng.gen_range(0.0..0.1) };

        let analytic = net.gradient(&batch, penalty).flatten();
        let base = net.params();
        let mut probe = net.clone();
        for k in 0..base.len() {
            let mut p = base.clone();
            p[k] = base[k] + GRADIENT_STEP;
            probe.set_params(&p);
            let up = probe.loss(&batch, penalty);
            p[k] = base[k] - GRADIENT_STEP;
            probe.set_params(&p);
            let down = probe.loss(&batch, penalty);
            let numeric = (up - down) / (2.0 * GRADIENT_STEP);
            worst = worst.max(relative_error(analytic[k], numeric, GRADIENT_FLOOR));
        }
    }
    worst
}
