// Builds the 9-5-5-1 mixed-activation network, evaluates it on one input,
// and compares the analytic gradient with central finite differences.

use noxcast::dataset::Predictors;
use noxcast::network::{LayerSpec, Network, Regressor};

pub fn run_example() -> noxcast::Result<()> {
    let specs = LayerSpec::default_pair();
    let net = Network::init(&specs, 42);
    println!("parameters: {}", net.n_params());
    for (i, layer) in net.hidden.iter().enumerate() {
        let acts: Vec<String> = layer.activations.iter().map(|a| format!("{a:?}")).collect();
        println!("hidden layer {}: [{}]", i + 1, acts.join(", "));
    }

    let x: Predictors = [15.0, 1013.0, 77.0, 3.9, 25.5, 1081.0, 546.0, 133.0, 12.0];
    let trace = net.forward(&x);
    println!("output for a typical operating point: {:.6}", trace.output);
    assert_eq!(trace.output, net.predict(&x));

    let batch = vec![(x, 65.0), ([5.0, 1020.0, 90.0, 3.0, 20.0, 1060.0, 549.0, 120.0, 11.0], 80.0)];
    let penalty = 1e-4;
    let analytic = net.gradient(&batch, penalty).flatten();

    let h = 1e-6;
    let base = net.params();
    let mut probe = net.clone();
    let mut worst: f64 = 0.0;
    for k in 0..base.len() {
        let mut p = base.clone();
        p[k] += h;
        probe.set_params(&p);
        let up = probe.loss(&batch, penalty);
        p[k] -= 2.0 * h;
        probe.set_params(&p);
        let down = probe.loss(&batch, penalty);
        let numeric = (up - down) / (2.0 * h);
        let rel = (analytic[k] - numeric).abs() / (analytic[k].abs() + numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    println!("largest relative gradient error over {} parameters: {worst:.2e}", base.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example()
}
