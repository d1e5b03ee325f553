//! Runs every example at reduced size.

mod load_and_summarize {
    include!("../examples/load_and_summarize.rs");
}
mod correlation_table {
    include!("../examples/correlation_table.rs");
}
mod network_forward_and_gradient {
    include!("../examples/network_forward_and_gradient.rs");
}
mod split_strategies {
    include!("../examples/split_strategies.rs");
}
mod train_and_evaluate {
    include!("../examples/train_and_evaluate.rs");
}
mod importance_ranking {
    include!("../examples/importance_ranking.rs");
}
mod prediction_profiler {
    include!("../examples/prediction_profiler.rs");
}
mod minimize_nox {
    include!("../examples/minimize_nox.rs");
}
mod full_pipeline_report {
    include!("../examples/full_pipeline_report.rs");
}

#[test]
fn load_and_summarize_runs() {
    load_and_summarize::run_example(40).unwrap();
}

#[test]
fn correlation_table_runs() {
    correlation_table::run_example(60).unwrap();
}

#[test]
fn network_forward_and_gradient_runs() {
    network_forward_and_gradient::run_example().unwrap();
}

#[test]
fn split_strategies_runs() {
    split_strategies::run_example(300).unwrap();
}

#[test]
fn train_and_evaluate_runs() {
    train_and_evaluate::run_example(120, 60).unwrap();
}

#[test]
fn importance_ranking_runs() {
    importance_ranking::run_example(120, 60).unwrap();
}

#[test]
fn prediction_profiler_runs() {
    prediction_profiler::run_example(120, 60).unwrap();
}

#[test]
fn minimize_nox_runs() {
    minimize_nox::run_example(120, 60).unwrap();
}

#[test]
fn full_pipeline_report_runs() {
    full_pipeline_report::run_example(60, 30).unwrap();
}
