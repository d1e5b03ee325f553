//! Command-line front end. The `noxcast` binary is a thin wrapper over
//! [`run`].
//!
//! Every subcommand reloads the data files, does one step of the pipeline
//! and writes its artifacts (see [`crate::artifacts`]) under the output
//! directory. A single global seed feeds every randomized step through fixed
//! offsets: split `+1`, weight init `+2`, importance `+3`, optimizer `+4`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{permutation_importance, profile, residual_table, BasePoint};
use crate::artifacts::{self, ArtifactWriter, Provenance, Stamped};
use crate::dataset::{csv_files_in, load_year_files, Column, Dataset, LoadOptions, MalformedRows, Schema, YearFile};
use crate::error::{Error, Result};
use crate::network::{LayerSpec, Network};
use crate::optimizer::{minimize_response, BoxConstraints, DesirabilitySpec, OptimizerConfig};
use crate::report::generate_report;
use crate::stats::{column_stats, pearson_matrix};
use crate::trainer::{evaluate, train, Partition, SplitAssignment, SplitStrategy, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Temporal,
    #[default]
    Stratified,
}

/// Seeds handed to each randomized step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    pub split: u64,
    pub init: u64,
    pub importance: u64,
    pub optimizer: u64,
}

impl Seeds {
    pub fn derive(global: u64) -> Self {
        Seeds {
            split: global.wrapping_add(1),
            init: global.wrapping_add(2),
            importance: global.wrapping_add(3),
            optimizer: global.wrapping_add(4),
        }
    }
}

/// Everything a pipeline run needs. Can be given as JSON via `--config`;
/// command-line flags take precedence over the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// CSV files (one per year) or directories holding them.
    pub data: Vec<PathBuf>,
    pub schema: Option<PathBuf>,
    /// Year for a single data file whose name carries none.
    pub year: Option<i32>,
    /// Drop malformed rows instead of failing.
    pub lenient: bool,
    pub strategy: StrategyKind,
    pub train_years: Vec<i32>,
    pub validation_years: Vec<i32>,
    pub test_years: Vec<i32>,
    pub fractions: [f64; 3],
    /// Its `seed` is replaced by the derived init seed.
    pub train: TrainConfig,
    pub importance_repeats: usize,
    pub importance_partition: Partition,
    pub grid_n: usize,
    pub hist_bins: usize,
    pub n_starts: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub overwrite: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: Vec::new(),
            schema: None,
            year: None,
            lenient: false,
            strategy: StrategyKind::Stratified,
            train_years: vec![2011, 2012, 2013],
            validation_years: vec![2014],
            test_years: vec![2015],
            fractions: [0.6, 0.2, 0.2],
            train: TrainConfig::default(),
            importance_repeats: 10,
            importance_partition: Partition::Validation,
            grid_n: 50,
            hist_bins: 30,
            n_starts: 32,
            seed: 0,
            out: PathBuf::from("noxcast-out"),
            overwrite: false,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        // relative paths in a config file are relative to the file
        if let Some(base) = path.parent() {
            for p in cfg.data.iter_mut().chain(cfg.schema.iter_mut()) {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn seeds(&self) -> Seeds {
        Seeds::derive(self.seed)
    }

    pub fn split_strategy(&self) -> SplitStrategy {
        self.split_strategy_for(self.strategy)
    }

    pub fn split_strategy_for(&self, kind: StrategyKind) -> SplitStrategy {
        match kind {
            StrategyKind::Temporal => SplitStrategy::TemporalByYear {
                train_years: self.train_years.clone(),
                validation_years: self.validation_years.clone(),
                test_years: self.test_years.clone(),
            },
            StrategyKind::Stratified => SplitStrategy::StratifiedByYear {
                fractions: self.fractions,
                seed: self.seeds().split,
            },
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            seed: self.seeds().init,
            ..self.train.clone()
        }
    }

    /// Data files with their years; directories expand to their `.csv` files.
    pub fn year_files(&self) -> Result<Vec<YearFile>> {
        if self.data.is_empty() {
            return Err(Error::Config("no data files given (use --data)".into()));
        }
        let mut paths = Vec::new();
        for p in &self.data {
            if p.is_dir() {
                let found = csv_files_in(p)?;
                if found.is_empty() {
                    return Err(Error::Config(format!("no .csv files in {}", p.display())));
                }
                paths.extend(found);
            } else if p.is_file() {
                paths.push(p.clone());
            } else {
                return Err(Error::Config(format!("data path not found: {}", p.display())));
            }
        }
        match self.year {
            Some(year) if paths.len() == 1 => Ok(vec![YearFile {
                path: paths.remove(0),
                year,
            }]),
            Some(_) => Err(Error::Config("--year applies to a single data file only".into())),
            None => paths.into_iter().map(YearFile::from_path).collect(),
        }
    }

    pub fn load_schema(&self) -> Result<Schema> {
        match &self.schema {
            Some(p) if !p.exists() => Err(Error::Config(format!("schema file not found: {}", p.display()))),
            Some(p) => Schema::from_json_file(p),
            None => Ok(Schema::public_dataset()),
        }
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        let schema = self.load_schema()?;
        let files = self.year_files()?;
        let options = LoadOptions {
            malformed: if self.lenient {
                MalformedRows::Reject
            } else {
                MalformedRows::Fail
            },
            ..LoadOptions::default()
        };
        let loaded = load_year_files(&files, &schema, &options)?;
        for d in &loaded.diagnostics {
            eprintln!("warning: {d}");
        }
        Ok(loaded.dataset)
    }
}

#[derive(Debug, Parser)]
#[command(name = "noxcast", version, about = "NOx emission modelling for degrading gas turbines")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Per-year CSV files or directories containing them.
    #[arg(long, global = true, num_args = 1.., value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    /// JSON column mapping (canonical name -> source_name, unit).
    #[arg(long, global = true)]
    pub schema: Option<PathBuf>,
    /// Year of a single data file whose name has none.
    #[arg(long, global = true)]
    pub year: Option<i32>,
    /// Output directory.
    #[arg(long, global = true, env = "NOXCAST_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Replace existing artifacts.
    #[arg(long, global = true)]
    pub overwrite: bool,
    /// Skip malformed rows (with a warning) instead of failing.
    #[arg(long, global = true)]
    pub lenient: bool,
}

#[derive(Debug, Args, Default)]
pub struct StrategyArgs {
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyKind>,
    #[arg(long, value_delimiter = ',')]
    pub train_years: Option<Vec<i32>>,
    #[arg(long, value_delimiter = ',')]
    pub validation_years: Option<Vec<i32>>,
    #[arg(long, value_delimiter = ',')]
    pub test_years: Option<Vec<i32>>,
    /// Train, validation and test fractions, e.g. 0.6,0.2,0.2.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate the data files; write the dataset summary.
    Ingest,
    /// Correlation matrix, boxplot summaries and histograms.
    Stats {
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Assign records to train/validation/test.
    Split {
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Train the network and write the model file and history.
    Train {
        #[command(flatten)]
        strategy: StrategyArgs,
        /// JSON training configuration.
        #[arg(long)]
        train_config: Option<PathBuf>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        max_epochs: Option<usize>,
        #[arg(long)]
        patience: Option<usize>,
        #[arg(long)]
        penalty: Option<f64>,
    },
    /// Fit metrics and residuals for every partition.
    Evaluate {
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Permutation importance ranking.
    Importance {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        partition: Option<Partition>,
    },
    /// Prediction profiles, one CSV per variable.
    Profile {
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Variables to sweep (default: all nine).
        #[arg(long, value_delimiter = ',')]
        variable: Vec<Column>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Settings that minimize predicted NOx inside the observed box.
    Optimize {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Markdown report over whatever artifacts exist.
    Report {
        /// Report path (default: <out>/report.md).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl clap::builder::ValueParserFactory for Column {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Column>().map_err(|e| e.to_string()))
    }
}

impl clap::builder::ValueParserFactory for Partition {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Partition>().map_err(|e| e.to_string()))
    }
}

fn apply_strategy(cfg: &mut RunConfig, args: &StrategyArgs) -> Result<()> {
    if let Some(s) = args.strategy {
        cfg.strategy = s;
    }
    if let Some(y) = &args.train_years {
        cfg.train_years = y.clone();
    }
    if let Some(y) = &args.validation_years {
        cfg.validation_years = y.clone();
    }
    if let Some(y) = &args.test_years {
        cfg.test_years = y.clone();
    }
    if let Some(f) = &args.fractions {
        cfg.fractions = <[f64; 3]>::try_from(f.as_slice())
            .map_err(|_| Error::Config("--fractions takes exactly three values".into()))?;
    }
    Ok(())
}

/// Builds the effective configuration: defaults, then `--config`, then flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    if !g.data.is_empty() {
        cfg.data = g.data.clone();
    }
    if g.schema.is_some() {
        cfg.schema = g.schema.clone();
    }
    if g.year.is_some() {
        cfg.year = g.year;
    }
    if let Some(out) = &g.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    cfg.overwrite |= g.overwrite;
    cfg.lenient |= g.lenient;

    match &cli.command {
        Command::Stats { bins } => {
            if let Some(b) = bins {
                cfg.hist_bins = *b;
            }
        }
        Command::Split { strategy } | Command::Evaluate { strategy } => apply_strategy(&mut cfg, strategy)?,
        Command::Train {
            strategy,
            train_config,
            learning_rate,
            max_epochs,
            patience,
            penalty,
        } => {
            apply_strategy(&mut cfg, strategy)?;
            if let Some(p) = train_config {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                cfg.train = serde_json::from_str(&text).map_err(|source| Error::Json {
                    path: p.clone(),
                    source,
                })?;
            }
            if let Some(v) = learning_rate {
                cfg.train.learning_rate = *v;
            }
            if let Some(v) = max_epochs {
                cfg.train.max_epochs = *v;
            }
            if let Some(v) = patience {
                cfg.train.patience = *v;
            }
            if let Some(v) = penalty {
                cfg.train.penalty = *v;
            }
        }
        Command::Importance {
            strategy,
            repeats,
            partition,
        } => {
            apply_strategy(&mut cfg, strategy)?;
            if let Some(r) = repeats {
                cfg.importance_repeats = *r;
            }
            if let Some(p) = partition {
                cfg.importance_partition = *p;
            }
        }
        Command::Profile { strategy, grid, .. } => {
            apply_strategy(&mut cfg, strategy)?;
            if let Some(g) = grid {
                cfg.grid_n = *g;
            }
        }
        Command::Optimize { strategy, starts } => {
            apply_strategy(&mut cfg, strategy)?;
            if let Some(s) = starts {
                cfg.n_starts = *s;
            }
        }
        Command::Ingest | Command::Report { .. } => {}
    }
    cfg.train.validate()?;
    Ok(cfg)
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(written) => {
            for p in written {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs one parsed command; returns the artifacts written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = resolve_config(cli)?;
    let mut writer = ArtifactWriter::new(&cfg.out, cfg.overwrite);
    match &cli.command {
        Command::Ingest => ingest(&cfg, &mut writer)?,
        Command::Stats { .. } => stats(&cfg, &mut writer)?,
        Command::Split { .. } => split(&cfg, &mut writer)?,
        Command::Train { .. } => train_cmd(&cfg, &mut writer)?,
        Command::Evaluate { .. } => evaluate_cmd(&cfg, &mut writer)?,
        Command::Importance { .. } => importance_cmd(&cfg, &mut writer)?,
        Command::Profile { variable, .. } => profile_cmd(&cfg, variable, &mut writer)?,
        Command::Optimize { .. } => optimize_cmd(&cfg, &mut writer)?,
        Command::Report { output } => {
            let text = generate_report(&cfg.out)?;
            let path = output.clone().unwrap_or_else(|| cfg.out.join(artifacts::REPORT));
            artifacts::write_atomic(&path, &text, cfg.overwrite)?;
            return Ok(vec![path]);
        }
    }
    Ok(writer.written().to_vec())
}

fn provenance(cfg: &RunConfig, strategy: bool) -> Provenance {
    let slug = strategy.then(|| cfg.split_strategy().slug());
    Provenance::new(cfg.seed, slug)
}

fn strategy_dir(cfg: &RunConfig) -> PathBuf {
    PathBuf::from(cfg.split_strategy().slug())
}

fn ingest(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let summary = Stamped {
        provenance: provenance(cfg, false),
        body: ds.summary(),
    };
    w.write_json(artifacts::DATASET_SUMMARY, &summary)?;
    Ok(())
}

fn stats(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let prov = provenance(cfg, false);
    let matrix = pearson_matrix(&ds)?;
    w.write_csv(artifacts::CORRELATION, &prov, &matrix.to_csv())?;
    let body = artifacts::ColumnStatsBody {
        columns: column_stats(&ds, cfg.hist_bins)?,
    };
    w.write_json(artifacts::COLUMN_STATS, &Stamped { provenance: prov, body })?;
    Ok(())
}

/// The split artifact if one exists for this strategy, otherwise a fresh one.
fn resolve_split(cfg: &RunConfig, ds: &Dataset) -> Result<SplitAssignment> {
    let strategy = cfg.split_strategy();
    let path = cfg.out.join(strategy.slug()).join(artifacts::SPLIT);
    if path.exists() {
        let text = artifacts::read_artifact(&path, "noxcast split")?;
        let split = SplitAssignment {
            labels: SplitAssignment::labels_from_csv(&text)?,
            strategy,
        };
        split.check_matches(ds)?;
        Ok(split)
    } else {
        strategy.apply(ds)
    }
}

fn load_model(cfg: &RunConfig) -> Result<Network> {
    let path = cfg.out.join(strategy_dir(cfg)).join(artifacts::MODEL);
    if !path.exists() {
        return Err(Error::MissingArtifact {
            path,
            hint: format!("noxcast train --strategy {}", cfg.split_strategy().slug()),
        });
    }
    Network::load(&path)
}

fn split(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let split = cfg.split_strategy().apply(&ds)?;
    w.write_csv(strategy_dir(cfg).join(artifacts::SPLIT), &provenance(cfg, true), &split.to_csv())?;
    Ok(())
}

fn train_cmd(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let split = resolve_split(cfg, &ds)?;
    let specs = LayerSpec::default_pair();
    let trained = train(&ds, &split, &specs, &cfg.train_config())?;
    let dir = strategy_dir(cfg);
    let prov = provenance(cfg, true);

    let mut model = trained.network.to_json();
    model.push('\n');
    w.write(dir.join(artifacts::MODEL), &model)?;
    w.write_csv(dir.join(artifacts::HISTORY), &prov, &trained.history.to_csv())?;
    let counts = split.counts();
    let summary = artifacts::TrainSummary {
        caption: split.strategy.caption(),
        counts: Partition::ALL
            .iter()
            .map(|p| (p.name().to_string(), counts[*p as usize]))
            .collect(),
        epochs_run: trained.history.epochs.len() - 1,
        best_epoch: trained.history.best_epoch,
        best_validation_sse: trained.history.best_validation_sse(),
        stop_reason: trained.history.stop_reason,
        config_digest: trained.network.config_digest.clone(),
    };
    w.write_json(dir.join(artifacts::TRAIN_SUMMARY), &Stamped { provenance: prov, body: summary })?;
    Ok(())
}

fn evaluate_cmd(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let split = resolve_split(cfg, &ds)?;
    let net = load_model(cfg)?;
    let dir = strategy_dir(cfg);
    let prov = provenance(cfg, true);
    for p in Partition::ALL {
        let metrics = evaluate(&net, &ds, &split, p)?;
        let body = artifacts::MetricsBody {
            caption: split.strategy.caption(),
            metrics,
        };
        w.write_json(dir.join(artifacts::metrics_file(p)), &Stamped { provenance: prov.clone(), body })?;
        let residuals = residual_table(&net, &ds, &split, p)?;
        w.write_csv(dir.join(artifacts::residuals_file(p)), &prov, &residuals.to_csv())?;
    }
    Ok(())
}

fn importance_cmd(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let split = resolve_split(cfg, &ds)?;
    let net = load_model(cfg)?;
    let ranking = permutation_importance(
        &net,
        &ds,
        &split,
        cfg.importance_partition,
        cfg.importance_repeats,
        cfg.seeds().importance,
    )?;
    w.write_csv(strategy_dir(cfg).join(artifacts::IMPORTANCE), &provenance(cfg, true), &ranking.to_csv())?;
    Ok(())
}

fn profile_cmd(cfg: &RunConfig, variables: &[Column], w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let net = load_model(cfg)?;
    let vars: Vec<Column> = if variables.is_empty() {
        Column::PREDICTORS.to_vec()
    } else {
        variables.to_vec()
    };
    let prov = provenance(cfg, true);
    for v in vars {
        let curve = profile(&net, &ds, v, &BasePoint::Medians, cfg.grid_n)?;
        w.write_csv(strategy_dir(cfg).join(artifacts::profile_file(v)), &prov, &curve.to_csv())?;
    }
    Ok(())
}

fn optimize_cmd(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let ds = cfg.load_dataset()?;
    let net = load_model(cfg)?;
    let bounds = BoxConstraints::observed(&ds)?;
    let spec = DesirabilitySpec::minimize_observed(&ds)?;
    let opt = OptimizerConfig {
        n_starts: cfg.n_starts,
        seed: cfg.seeds().optimizer,
        ..OptimizerConfig::default()
    };
    let result = minimize_response(&net, &bounds, ds.records(), &spec, &opt)?;
    let prov = provenance(cfg, true);
    let body = artifacts::OptimumBody {
        x_star: Column::PREDICTORS
            .iter()
            .zip(&result.x_star)
            .map(|(c, v)| (c.name().to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        predicted_nox: result.predicted_nox,
        desirability: result.desirability,
        desirability_spec: spec,
        n_starts: result.n_starts,
        best_start: result.best_start,
    };
    let dir = strategy_dir(cfg);
    w.write_json(dir.join(artifacts::OPTIMUM), &Stamped { provenance: prov.clone(), body })?;
    w.write_csv(dir.join(artifacts::OPTIMIZER_TRACE), &prov, &result.trace_csv())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("noxcast").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("run.json");
        std::fs::write(
            &cfg_path,
            r#"{"data": ["d/gt_2011.csv"], "seed": 5, "strategy": "temporal", "grid_n": 7, "train": {"max_epochs": 30, "patience": 10}}"#,
        )
        .unwrap();
        let cli = parse(&["--config", cfg_path.to_str().unwrap(), "train", "--max-epochs", "40", "--seed", "9"]);
        let cfg = resolve_config(&cli).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.train.max_epochs, 40);
        assert_eq!(cfg.train.patience, 10);
        assert_eq!(cfg.strategy, StrategyKind::Temporal);
        assert_eq!(cfg.grid_n, 7);
        assert_eq!(cfg.data, vec![dir.path().join("d/gt_2011.csv")]);
        assert_eq!(cfg.train_config().seed, 11);
    }

    #[test]
    fn strategy_flags() {
        let cli = parse(&["split", "--strategy", "stratified", "--fractions", "0.5,0.25,0.25", "--seed", "3"]);
        let cfg = resolve_config(&cli).unwrap();
        assert_eq!(
            cfg.split_strategy(),
            SplitStrategy::StratifiedByYear {
                fractions: [0.5, 0.25, 0.25],
                seed: 4
            }
        );
        let cli = parse(&["split", "--strategy", "temporal", "--train-years", "2011,2012", "--validation-years", "2013"]);
        let cfg = resolve_config(&cli).unwrap();
        assert!(matches!(
            cfg.split_strategy(),
            SplitStrategy::TemporalByYear { train_years, validation_years, .. }
                if train_years == vec![2011, 2012] && validation_years == vec![2013]
        ));
    }

    #[test]
    fn unknown_flags_and_subcommands_fail() {
        assert_ne!(run(["noxcast", "bogus"]), 0);
        assert_ne!(run(["noxcast", "stats", "--nope"]), 0);
        assert!(Cli::try_parse_from(["noxcast", "profile", "--variable", "XYZ"]).is_err());
    }

    #[test]
    fn seeds_use_fixed_offsets() {
        let s = Seeds::derive(10);
        assert_eq!((s.split, s.init, s.importance, s.optimizer), (11, 12, 13, 14));
        assert_eq!(Seeds::derive(u64::MAX).split, 0);
    }
}
