// Runs every CLI step on one dataset and prints the resulting report.
//
// Uses NOXCAST_DATA when set; otherwise writes synthetic yearly CSV files
// first. Artifacts go to a temporary directory.

use std::ffi::OsString;
use std::path::PathBuf;

use noxcast::synth::{write_public_csv, SyntheticPlant};

pub fn run_example(per_year: usize, max_epochs: usize) -> noxcast::Result<()> {
    let work = std::env::temp_dir().join(format!("noxcast-pipeline-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&work);
    let data: PathBuf = match std::env::var_os("NOXCAST_DATA") {
        Some(dir) => dir.into(),
        None => {
            let dir = work.join("data");
            write_public_csv(&SyntheticPlant::small(per_year, 13).generate(), &dir)?;
            dir
        }
    };
    let out = work.join("out");

    let epochs = max_epochs.to_string();
    let patience = max_epochs.min(100).to_string();
    let mut steps: Vec<Vec<&str>> = vec![vec!["ingest"], vec!["stats"]];
    for strategy in ["temporal", "stratified"] {
        steps.push(vec!["split", "--strategy", strategy]);
        steps.push(vec!["train", "--strategy", strategy, "--max-epochs", &epochs, "--patience", &patience]);
        steps.push(vec!["evaluate", "--strategy", strategy]);
        steps.push(vec!["importance", "--strategy", strategy]);
        steps.push(vec!["profile", "--strategy", strategy]);
        steps.push(vec!["optimize", "--strategy", strategy]);
    }
    steps.push(vec!["report"]);

    for step in steps {
        let mut args: Vec<OsString> = vec!["noxcast".into()];
        args.extend(step.iter().map(OsString::from));
        args.extend(["--data".into(), data.clone().into_os_string()]);
        args.extend(["--out".into(), out.clone().into_os_string()]);
        eprintln!("noxcast {}", step.join(" "));
        let code = noxcast::cli::run(args);
        if code != 0 {
            return Err(noxcast::Error::Config(format!("step `{}` exited with {code}", step.join(" "))));
        }
    }
    let report = std::fs::read_to_string(out.join("report.md")).expect("report written");
    println!("{report}");
    let _ = std::fs::remove_dir_all(&work);
    Ok(())
}

#[allow(dead_code)]
fn main() -> noxcast::Result<()> {
    run_example(7400, 2000)
}
