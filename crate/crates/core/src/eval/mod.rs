//! Benchmark protocol for objective scores against subjective ratings:
//! rank correlations, logistic mapping, PLCC/MAE/RMSE, the residual F-test,
//! cross-database averages and per-distortion breakdowns.
//!
//! Correlations in [`MetricRow`] are reported as absolute values so that MOS
//! (falling with degradation) and DMOS (rising) databases read the same way.

pub mod ftest;
pub mod logistic;
pub mod rank;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distortion::QualityRecord;
use crate::error::{IqaError, Result};

pub use ftest::{f_test, DEFAULT_CONFIDENCE};
pub use logistic::{fit_logistic, LogisticFit};
pub use rank::{krocc, pearson, srocc};

/// Fewest items a group needs before its metrics are reported.
pub const MIN_GROUP_SIZE: usize = 4;

/// Paired objective/subjective scores for one evaluation group.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreSeries {
    objective: Vec<f64>,
    subjective: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl ScoreSeries {
    pub fn new(objective: Vec<f64>, subjective: Vec<f64>) -> Result<Self> {
        if objective.len() != subjective.len() {
            return Err(IqaError::LengthMismatch(objective.len(), subjective.len()));
        }
        if objective.len() < MIN_GROUP_SIZE {
            return Err(IqaError::DegenerateSeries(format!(
                "need at least {MIN_GROUP_SIZE} items, got {}",
                objective.len()
            )));
        }
        if objective.iter().chain(&subjective).any(|v| !v.is_finite()) {
            return Err(IqaError::DegenerateSeries("non-finite score".into()));
        }
        Ok(Self {
            objective,
            subjective,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.objective.len() {
            return Err(IqaError::LengthMismatch(self.objective.len(), labels.len()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn subjective(&self) -> &[f64] {
        &self.subjective
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.objective.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objective.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub srocc: f64,
    pub krocc: f64,
    pub plcc: f64,
    pub mae: f64,
    pub rmse: f64,
    pub n: usize,
}

/// Correlation-only summary; MAE and RMSE depend on each database's rating
/// scale and are not averaged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageRow {
    pub srocc: f64,
    pub krocc: f64,
    pub plcc: f64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub direct: AverageRow,
    pub weighted: AverageRow,
}

/// Everything derived from one series: the metrics plus the fitted mapping
/// and its residuals (`subjective - mapped`), which the F-test consumes.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesEvaluation {
    pub row: MetricRow,
    pub fit: LogisticFit,
    pub mapped: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Returns `(plcc, mae, rmse)` between mapped objective and subjective scores.
/// PLCC is signed here.
pub fn plcc_mae_rmse(series: &ScoreSeries, fit: &LogisticFit) -> Result<(f64, f64, f64)> {
    let mapped = fit.map(series.objective());
    error_metrics(&mapped, series.subjective())
}

fn error_metrics(mapped: &[f64], subjective: &[f64]) -> Result<(f64, f64, f64)> {
    let n = mapped.len() as f64;
    let residuals: Vec<f64> = subjective.iter().zip(mapped).map(|(s, m)| s - m).collect();
    let mae = residuals.iter().map(|r| r.abs()).sum::<f64>() / n;
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    // a perfectly flat mapping has no defined correlation
    let plcc = pearson(mapped, subjective).unwrap_or(0.0);
    Ok((plcc, mae, rmse))
}

pub fn evaluate_series(series: &ScoreSeries) -> Result<SeriesEvaluation> {
    let (x, y) = (series.objective(), series.subjective());
    let s = srocc(x, y)?;
    let k = krocc(x, y)?;
    let fit = fit_logistic(series)?;
    let mapped = fit.map(x);
    let (plcc, mae, rmse) = error_metrics(&mapped, y)?;
    let residuals = y.iter().zip(&mapped).map(|(s, m)| s - m).collect();
    Ok(SeriesEvaluation {
        row: MetricRow {
            srocc: s.abs(),
            krocc: k.abs(),
            plcc: plcc.abs(),
            mae,
            rmse,
            n: series.len(),
        },
        fit,
        mapped,
        residuals,
    })
}

/// Direct (arithmetic) and item-count-weighted means of SROCC, KROCC and PLCC.
pub fn aggregate(rows: &[MetricRow]) -> Result<Averages> {
    if rows.is_empty() {
        return Err(IqaError::DegenerateSeries("nothing to aggregate".into()));
    }
    let total: usize = rows.iter().map(|r| r.n).sum();
    if total == 0 {
        return Err(IqaError::DegenerateSeries("rows carry no items".into()));
    }
    let m = rows.len() as f64;
    let direct = AverageRow {
        srocc: rows.iter().map(|r| r.srocc).sum::<f64>() / m,
        krocc: rows.iter().map(|r| r.krocc).sum::<f64>() / m,
        plcc: rows.iter().map(|r| r.plcc).sum::<f64>() / m,
        n: total,
    };
    let weighted_mean = |f: fn(&MetricRow) -> f64| {
        rows.iter().map(|r| f(r) * r.n as f64).sum::<f64>() / total as f64
    };
    let weighted = AverageRow {
        srocc: weighted_mean(|r| r.srocc),
        krocc: weighted_mean(|r| r.krocc),
        plcc: weighted_mean(|r| r.plcc),
        n: total,
    };
    Ok(Averages { direct, weighted })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionRow {
    pub label: String,
    pub n: usize,
    /// Absent when the partition is too small or degenerate.
    pub srocc: Option<f64>,
}

/// Absolute SROCC per distortion label. Records without a label or a
/// subjective score are ignored.
pub fn group_by_distortion(records: &[QualityRecord]) -> Vec<DistortionRow> {
    let mut groups: BTreeMap<&str, Vec<&QualityRecord>> = BTreeMap::new();
    for r in records {
        if let (Some(label), Some(_)) = (&r.distortion_label, r.subjective) {
            groups.entry(label.as_str()).or_default().push(r);
        }
    }
    groups
        .into_iter()
        .map(|(label, mut items)| {
            items.sort_by(|a, b| (&a.ref_id, &a.test_id).cmp(&(&b.ref_id, &b.test_id)));
            let n = items.len();
            let srocc = (n >= MIN_GROUP_SIZE)
                .then(|| {
                    let x: Vec<f64> = items.iter().map(|r| r.q).collect();
                    let y: Vec<f64> = items.iter().filter_map(|r| r.subjective).collect();
                    srocc(&x, &y).ok().map(f64::abs)
                })
                .flatten();
            DistortionRow {
                label: label.to_string(),
                n,
                srocc,
            }
        })
        .collect()
}

/// Pairwise F-test verdicts between methods evaluated on the same items:
/// entry `[i][j]` is the verdict of method `i` against method `j`.
pub fn f_test_matrix(residuals: &[Vec<f64>], confidence: f64) -> Result<Vec<Vec<i8>>> {
    let m = residuals.len();
    let mut out = vec![vec![0i8; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = f_test(&residuals[i], &residuals[j], confidence)?;
            out[i][j] = v;
            out[j][i] = -v;
        }
    }
    Ok(out)
}
