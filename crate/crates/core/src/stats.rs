//! Descriptive statistics: boxplot summaries, histograms and the Pearson
//! correlation matrix of all ten columns.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Dataset};
use crate::error::{Error, Result};

/// Whisker multiplier for boxplot fences.
pub const FENCE_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub n_outliers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<Column>,
    pub values: Vec<Vec<f64>>,
}

/// Quantile of already-sorted data by linear interpolation between order
/// statistics at position `(n - 1) * p`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, 0.5))
}

pub fn five_number_summary(values: &[f64]) -> Result<BoxplotSummary> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - FENCE_FACTOR * iqr;
    let upper_fence = q3 + FENCE_FACTOR * iqr;
    let n_outliers = sorted
        .iter()
        .filter(|&&v| v < lower_fence || v > upper_fence)
        .count();
    Ok(BoxplotSummary {
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        iqr,
        lower_fence,
        upper_fence,
        n_outliers,
    })
}

/// Equal-width bins over `[min, max]`; the last bin includes its right edge.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Histogram> {
    if n_bins == 0 {
        return Err(Error::NoBins);
    }
    if values.is_empty() {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::ZeroWidthRange);
    }
    let width = (max - min) / n_bins as f64;
    let mut edges: Vec<f64> = (0..=n_bins).map(|i| min + width * i as f64).collect();
    edges[n_bins] = max;

    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let mut bin = (((v - min) / width).floor() as usize).min(n_bins - 1);
        // float rounding can put a value one bin off its edges
        while bin > 0 && v < edges[bin] {
            bin -= 1;
        }
        while bin + 1 < n_bins && v >= edges[bin + 1] {
            bin += 1;
        }
        counts[bin] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Pearson product-moment correlation of two equally long samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson needs equal-length samples");
    if x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Correlations between all ten columns, in the published table's order.
pub fn pearson_matrix(dataset: &Dataset) -> Result<CorrelationMatrix> {
    pearson_matrix_for(dataset, &Column::CORRELATION_ORDER)
}

pub fn pearson_matrix_for(dataset: &Dataset, labels: &[Column]) -> Result<CorrelationMatrix> {
    if dataset.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: dataset.len(),
        });
    }
    let columns: Vec<Vec<f64>> = labels.iter().map(|&c| dataset.column(c)).collect();
    for (c, col) in labels.iter().zip(&columns) {
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::ConstantColumn(c.name().to_string()));
        }
    }
    let k = labels.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in 0..i {
            let r = pearson(&columns[i], &columns[j]).expect("non-constant columns");
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: labels.to_vec(),
        values,
    })
}

impl CorrelationMatrix {
    pub fn get(&self, a: Column, b: Column) -> Option<f64> {
        let i = self.labels.iter().position(|&c| c == a)?;
        let j = self.labels.iter().position(|&c| c == b)?;
        Some(self.values[i][j])
    }

    /// CSV with the labels as header and row names.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            write!(out, ",{l}").unwrap();
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            out.push_str(l.name());
            for v in row {
                write!(out, ",{v:.6}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Boxplot and histogram of one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub column: Column,
    pub unit: String,
    pub n: usize,
    pub mean: f64,
    pub boxplot: BoxplotSummary,
    pub histogram: Histogram,
}

pub fn column_stats(dataset: &Dataset, n_bins: usize) -> Result<Vec<ColumnStats>> {
    Column::CORRELATION_ORDER
        .iter()
        .map(|&c| {
            let values = dataset.column(c);
            Ok(ColumnStats {
                column: c,
                unit: c.unit().to_string(),
                n: values.len(),
                mean: values.iter().sum::<f64>() / values.len().max(1) as f64,
                boxplot: five_number_summary(&values)?,
                histogram: histogram(&values, n_bins)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ProcessRecord, Schema};
    use proptest::prelude::*;

    #[test]
    fn five_numbers_exact_positions() {
        let s = five_number_summary(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
        assert_eq!((s.lower_fence, s.upper_fence), (-1.0, 7.0));
        assert_eq!(s.n_outliers, 0);
        assert_eq!((s.min, s.max), (1.0, 5.0));
    }

    #[test]
    fn five_numbers_with_outlier() {
        // q1 = 2, q3 = 4 at positions 1 and 3; iqr 2; upper fence 7
        let s = five_number_summary(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(s.iqr, 2.0);
        assert_eq!(s.upper_fence, 4.0 + 1.5 * 2.0);
        assert_eq!(s.n_outliers, 1);
    }

    #[test]
    fn five_numbers_interpolates() {
        // n = 4: q1 at 0.75 -> 1.75, median at 1.5 -> 2.5, q3 at 2.25 -> 3.25
        let s = five_number_summary(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn five_numbers_degenerate() {
        let s = five_number_summary(&[5.0; 4]).unwrap();
        assert_eq!(s.iqr, 0.0);
        assert_eq!((s.lower_fence, s.upper_fence), (5.0, 5.0));
        assert_eq!(s.n_outliers, 0);
        assert!(matches!(five_number_summary(&[1.0]), Err(Error::TooFewValues { .. })));
    }

    #[test]
    fn histogram_basic() {
        let h = histogram(&[0.0, 1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(h.edges, vec![0.0, 1.5, 3.0]);
        assert_eq!(h.counts, vec![2, 2]);
        assert!(matches!(histogram(&[2.0; 5], 3), Err(Error::ZeroWidthRange)));
        assert!(matches!(histogram(&[1.0, 2.0], 0), Err(Error::NoBins)));
    }

    fn ds(rows: &[(f64, f64)]) -> Dataset {
        let records = rows
            .iter()
            .enumerate()
            .map(|(i, &(a, n))| {
                let mut values = [0.0; 9];
                for (j, v) in values.iter_mut().enumerate() {
                    *v = ((i * (j + 2) + i * i) % 11) as f64 + j as f64;
                }
                values[0] = a;
                ProcessRecord { year: 2011, values, nox: n }
            })
            .collect();
        Dataset::new(records, Schema::canonical())
    }

    #[test]
    fn matrix_shape_and_diagonal() {
        let d = ds(&[(1.0, 3.0), (2.0, 2.5), (3.0, 4.0), (4.0, 1.0), (5.0, 0.0), (6.0, 2.0), (7.0, 1.0)]);
        let m = pearson_matrix(&d).unwrap();
        assert_eq!(m.labels[0], Column::NOX);
        for i in 0..10 {
            assert_eq!(m.values[i][i], 1.0);
            for j in 0..10 {
                assert_eq!(m.values[i][j], m.values[j][i]);
                assert!(m.values[i][j].abs() <= 1.0);
            }
        }
        let csv = m.to_csv();
        assert!(csv.starts_with(",NOX,AT,AH,AP,TIT"));
        assert_eq!(csv.lines().count(), 11);
    }

    #[test]
    fn constant_column_is_named() {
        let d = ds(&[(1.0, 3.0), (1.0, 2.0), (1.0, 4.0)]);
        assert!(matches!(pearson_matrix(&d), Err(Error::ConstantColumn(c)) if c == "AT"));
    }

    #[test]
    fn pearson_perfect_lines() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &[-1.0, -2.0, -3.0, -4.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[1.0; 4]), None);
    }

    proptest! {
        #[test]
        fn affine_invariance(
            pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 3..60),
            a in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0],
            b in -1e3f64..1e3,
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let scaled: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            if let (Some(r), Some(r2)) = (pearson(&x, &y), pearson(&scaled, &y)) {
                prop_assert!((r2 - a.signum() * r).abs() < 1e-9);
            }
        }

        #[test]
        fn fences_and_order(values in prop::collection::vec(-1e4f64..1e4, 2..200)) {
            let s = five_number_summary(&values).unwrap();
            prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
            prop_assert_eq!(s.iqr, s.q3 - s.q1);
            prop_assert_eq!(s.lower_fence, s.q1 - 1.5 * s.iqr);
            prop_assert_eq!(s.upper_fence, s.q3 + 1.5 * s.iqr);
            let n = values.iter().filter(|&&v| v < s.lower_fence || v > s.upper_fence).count();
            prop_assert_eq!(s.n_outliers, n);
        }

        #[test]
        fn histogram_conserves_counts(values in prop::collection::vec(-1e3f64..1e3, 2..300), bins in 1usize..40) {
            if let Ok(h) = histogram(&values, bins) {
                prop_assert_eq!(h.counts.iter().sum::<usize>(), values.len());
                prop_assert!(h.edges.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(h.edges.len(), bins + 1);
            }
        }
    }
}
