//! Assignment of records to train / validation / test partitions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Validation,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Validation, Partition::Test];

    pub fn name(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Validation => "validation",
            Partition::Test => "test",
        }
    }

    /// Heading used in metric tables.
    pub fn title(self) -> &'static str {
        match self {
            Partition::Train => "Training",
            Partition::Validation => "Validation",
            Partition::Test => "Test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" | "training" => Ok(Partition::Train),
            "validation" | "valid" | "val" => Ok(Partition::Validation),
            "test" => Ok(Partition::Test),
            other => Err(Error::Config(format!("unknown partition `{other}`"))),
        }
    }
}

/// How a split was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum SplitStrategy {
    /// Whole calendar years per partition.
    TemporalByYear {
        train_years: Vec<i32>,
        validation_years: Vec<i32>,
        test_years: Vec<i32>,
    },
    /// Independent random allocation within each year.
    StratifiedByYear { fractions: [f64; 3], seed: u64 },
}

impl SplitStrategy {
    /// Train 2011–2013, validate 2014, test 2015.
    pub fn temporal_default() -> Self {
        SplitStrategy::TemporalByYear {
            train_years: vec![2011, 2012, 2013],
            validation_years: vec![2014],
            test_years: vec![2015],
        }
    }

    /// 60 / 20 / 20 within every year.
    pub fn stratified_default(seed: u64) -> Self {
        SplitStrategy::StratifiedByYear {
            fractions: [0.6, 0.2, 0.2],
            seed,
        }
    }

    /// Short name used for artifact directories.
    pub fn slug(&self) -> &'static str {
        match self {
            SplitStrategy::TemporalByYear { .. } => "temporal",
            SplitStrategy::StratifiedByYear { .. } => "stratified",
        }
    }

    pub fn caption(&self) -> String {
        match self {
            SplitStrategy::TemporalByYear {
                train_years,
                validation_years,
                test_years,
            } => format!(
                "Trained on {}, validated on {}, tested on {}",
                years_label(train_years),
                years_label(validation_years),
                years_label(test_years)
            ),
            SplitStrategy::StratifiedByYear { fractions, .. } => format!(
                "Stratified by year: {:.0}% training, {:.0}% validation, {:.0}% test",
                fractions[0] * 100.0,
                fractions[1] * 100.0,
                fractions[2] * 100.0
            ),
        }
    }

    pub fn apply(&self, dataset: &Dataset) -> Result<SplitAssignment> {
        match self {
            SplitStrategy::TemporalByYear {
                train_years,
                validation_years,
                test_years,
            } => split_temporal(dataset, train_years, validation_years, test_years),
            SplitStrategy::StratifiedByYear { fractions, seed } => {
                split_stratified(dataset, *fractions, *seed)
            }
        }
    }
}

fn years_label(years: &[i32]) -> String {
    let mut ys = years.to_vec();
    ys.sort_unstable();
    let contiguous = ys.windows(2).all(|w| w[1] == w[0] + 1);
    match ys.as_slice() {
        [] => "no years".to_string(),
        [y] => format!("Y{y}"),
        [first, .., last] if contiguous => format!("Y{first}-{last}"),
        _ => ys.iter().map(|y| format!("Y{y}")).collect::<Vec<_>>().join(", "),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub labels: Vec<Partition>,
    pub strategy: SplitStrategy,
}

impl SplitAssignment {
    /// Ordinals of the records in `partition`, ascending.
    pub fn indices(&self, partition: Partition) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == partition)
            .map(|(i, _)| i)
            .collect()
    }

    /// Record counts as (train, validation, test).
    pub fn counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for l in &self.labels {
            c[*l as usize] += 1;
        }
        c
    }

    pub fn check_matches(&self, dataset: &Dataset) -> Result<()> {
        if self.labels.len() != dataset.len() {
            return Err(Error::SplitMismatch {
                split: self.labels.len(),
                dataset: dataset.len(),
            });
        }
        Ok(())
    }

    /// `ordinal,label` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ordinal,label\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{i},{l}\n"));
        }
        out
    }

    /// Reads labels written by [`SplitAssignment::to_csv`]. Lines starting
    /// with `#` are ignored.
    pub fn labels_from_csv(text: &str) -> Result<Vec<Partition>> {
        let mut labels = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("ordinal") {
                continue;
            }
            let (ord, label) = line
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("split line {}: expected `ordinal,label`", n + 1)))?;
            let ord: usize = ord
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("split line {}: bad ordinal", n + 1)))?;
            if ord != labels.len() {
                return Err(Error::Config(format!(
                    "split line {}: ordinal {ord} out of sequence",
                    n + 1
                )));
            }
            labels.push(label.parse()?);
        }
        Ok(labels)
    }
}

pub fn split_temporal(
    dataset: &Dataset,
    train_years: &[i32],
    validation_years: &[i32],
    test_years: &[i32],
) -> Result<SplitAssignment> {
    let groups = [
        (Partition::Train, train_years),
        (Partition::Validation, validation_years),
        (Partition::Test, test_years),
    ];
    let mut seen = BTreeSet::new();
    for (_, years) in groups {
        for &y in years {
            if !seen.insert(y) {
                return Err(Error::OverlappingYears(y));
            }
        }
    }
    let unassigned: Vec<i32> = dataset
        .year_index()
        .iter()
        .filter(|(y, idx)| !idx.is_empty() && !seen.contains(y))
        .map(|(y, _)| *y)
        .collect();
    if !unassigned.is_empty() {
        return Err(Error::UnassignedYears(unassigned));
    }

    let labels: Vec<Partition> = dataset
        .records()
        .iter()
        .map(|r| {
            groups
                .iter()
                .find(|(_, ys)| ys.contains(&r.year))
                .map(|(p, _)| *p)
                .expect("every year assigned")
        })
        .collect();
    let split = SplitAssignment {
        labels,
        strategy: SplitStrategy::TemporalByYear {
            train_years: train_years.to_vec(),
            validation_years: validation_years.to_vec(),
            test_years: test_years.to_vec(),
        },
    };
    ensure_non_empty(&split)?;
    Ok(split)
}

/// Largest-remainder allocation of `n` items to `fractions`. Ties in the
/// remainder go to the earlier partition.
pub fn largest_remainder(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let quotas = fractions.map(|f| f * n as f64);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut order = [0usize, 1, 2];
    // stable sort keeps partition order among equal remainders
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra)
    });
    for &k in order.iter().take(n.saturating_sub(assigned)) {
        counts[k] += 1;
    }
    counts
}

pub fn validate_fractions(fractions: [f64; 3]) -> Result<()> {
    if fractions.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
        return Err(Error::InvalidFractions(format!(
            "{fractions:?}: every fraction must be positive"
        )));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidFractions(format!("{fractions:?} sums to {sum}")));
    }
    Ok(())
}

/// Within each year (ascending), shuffles the year's ordinals with one
/// ChaCha8 stream seeded by `seed` and hands out largest-remainder counts in
/// train, validation, test order.
pub fn split_stratified(dataset: &Dataset, fractions: [f64; 3], seed: u64) -> Result<SplitAssignment> {
    validate_fractions(fractions)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = vec![Partition::Train; dataset.len()];
    for ordinals in dataset.year_index().values() {
        let mut shuffled = ordinals.clone();
        shuffled.shuffle(&mut rng);
        let [n_train, n_val, _] = largest_remainder(shuffled.len(), fractions);
        for (k, &i) in shuffled.iter().enumerate() {
            labels[i] = if k < n_train {
                Partition::Train
            } else if k < n_train + n_val {
                Partition::Validation
            } else {
                Partition::Test
            };
        }
    }
    let split = SplitAssignment {
        labels,
        strategy: SplitStrategy::StratifiedByYear { fractions, seed },
    };
    ensure_non_empty(&split)?;
    Ok(split)
}

fn ensure_non_empty(split: &SplitAssignment) -> Result<()> {
    let counts = split.counts();
    for p in Partition::ALL {
        if counts[p as usize] == 0 {
            return Err(Error::EmptyPartition(p));
        }
    }
    Ok(())
}
