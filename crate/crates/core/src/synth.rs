//! Synthetic turbine data for demos and tests.
//!
//! Produces hourly records with the same columns, plausible ranges and
//! correlation structure as a real gas-turbine log: one latent load level
//! drives TIT, CDP, TEP and TEY, exhaust temperature falls with load, ambient
//! temperature follows a seasonal cycle, and the NOx response shifts
//! downward year over year to mimic equipment degradation. The numbers are
//! not real measurements.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{Column, Dataset, ProcessRecord, Schema};
use crate::error::{Error, Result};

/// Hourly record counts per year in the public turbine files.
pub const PUBLIC_YEAR_SIZES: [(i32, usize); 5] = [(2011, 7411), (2012, 7628), (2013, 7152), (2014, 7158), (2015, 7384)];

#[derive(Debug, Clone)]
pub struct SyntheticPlant {
    pub years: Vec<(i32, usize)>,
    pub seed: u64,
    /// NOx shift per year after the first, mg/m³ (negative = falling).
    pub drift_per_year: f64,
    /// Standard deviation of the unexplained NOx noise, mg/m³.
    pub noise: f64,
}

impl Default for SyntheticPlant {
    fn default() -> Self {
        SyntheticPlant {
            years: PUBLIC_YEAR_SIZES.to_vec(),
            seed: 2011,
            drift_per_year: -4.5,
            noise: 3.0,
        }
    }
}

impl SyntheticPlant {
    /// Same structure with `per_year` records in each of 2011–2015.
    pub fn small(per_year: usize, seed: u64) -> Self {
        SyntheticPlant {
            years: (2011..=2015).map(|y| (y, per_year)).collect(),
            seed,
            ..SyntheticPlant::default()
        }
    }

    pub fn generate(&self) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let std = Normal::new(0.0, 1.0).expect("unit normal");
        let g = |s: f64, rng: &mut ChaCha8Rng| s * std.sample(rng);
        let first_year = self.years.first().map(|y| y.0).unwrap_or(2011);

        let mut records = Vec::new();
        for &(year, n) in &self.years {
            let age = (year - first_year) as f64;
            for h in 0..n {
                let season = (2.0 * PI * h as f64 / n.max(1) as f64).sin();
                let at = (17.5 + 9.0 * season + g(4.0, &mut rng)).clamp(-6.0, 37.0);
                let ap = (1013.0 - 0.35 * (at - 17.5) + g(5.5, &mut rng)).clamp(985.0, 1036.0);
                let ah = (78.0 - 1.3 * (at - 17.5) + g(11.0, &mut rng)).clamp(24.0, 100.0);

                // load level in [0, 1], mostly near base load
                let load: f64 = if rng.gen_bool(0.35) {
                    rng.gen_range(0.0..0.6)
                } else {
                    (0.75 + g(0.12, &mut rng)).clamp(0.0, 1.0)
                };
                let tit = (1040.0 + 60.0 * load.sqrt() + g(2.5, &mut rng)).clamp(1000.0, 1100.9);
                let tey = (100.0 + 79.0 * load + 0.2 * (tit - 1085.0) + g(1.8, &mut rng)).clamp(100.0, 179.5);
                let cdp = (9.85 + 5.2 * load + g(0.12, &mut rng)).clamp(9.85, 15.16);
                let tep = (17.7 + 21.0 * load + 0.3 * (at - 17.5) * 0.1 + g(1.4, &mut rng)).clamp(17.7, 40.7);
                let tet = (550.0 - 38.0 * (load - 0.55).max(0.0) + 0.15 * (at - 17.5) + g(2.0, &mut rng)).clamp(511.0, 550.6);
                let afdp = (2.6 + 2.6 * load + 0.25 * age + g(0.45, &mut rng)).clamp(2.09, 7.61);

                let nox = 66.0 - 1.05 * (at - 17.5) + 0.04 * (ah - 78.0) + 0.03 * (ap - 1013.0)
                    + 9.0 * ((tit - 1075.0) / 12.0).tanh()
                    - 0.12 * (tey - 135.0)
                    + 0.25 * (tet - 545.0)
                    + 1.2 * (tep - 25.0) / 4.0
                    + self.drift_per_year * age * (1.0 + 0.25 * load)
                    + g(self.noise, &mut rng);
                records.push(ProcessRecord {
                    year,
                    values: [at, ap, ah, afdp, tep, tit, tet, tey, cdp],
                    nox: nox.clamp(25.9, 119.9),
                });
            }
        }
        Dataset::new(records, Schema::canonical())
    }
}

/// Writes one `gt_<year>.csv` per year with the public file headers
/// (`GTEP`, `TAT`). Returns the paths in year order.
pub fn write_public_csv(dataset: &Dataset, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let schema = Schema::public_dataset();
    let header: Vec<&str> = Column::ALL.iter().map(|&c| schema.get(c).source_name.as_str()).collect();
    let mut paths = Vec::new();
    for (year, idx) in dataset.year_index() {
        let mut text = header.join(",");
        text.push('\n');
        for &i in idx {
            let r = &dataset.records()[i];
            let row: Vec<String> = Column::ALL.iter().map(|&c| format!("{}", r.get(c))).collect();
            writeln!(text, "{}", row.join(",")).unwrap();
        }
        let path = dir.join(format!("gt_{year}.csv"));
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
