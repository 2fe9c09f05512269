//! Manifest-driven batch scoring and report assembly.
//!
//! Pairs are scored concurrently; everything after scoring runs on a
//! canonical ordering of the records, so the numbers in a report depend
//! neither on manifest row order nor on the worker count.

pub mod manifest;
pub mod report;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distortion::QualityRecord;
use crate::error::{IqaError, Result};
use crate::eval::{self, f_test, ScoreSeries};
use crate::image::load_pair;
use crate::metric::{MetricRegistry, QualityMetric};
use crate::saliency::SaliencyMethod;

pub use manifest::{load_manifest, Manifest, ManifestEntry, SkippedRow, SubjectiveKind};
pub use report::{
    read_report, write_records_csv, write_report, DatabaseResult, EvalReport, MethodReport,
    ScoredItem, SignedCorrelations,
};

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub saliency: SaliencyMethod,
    /// Further registered metrics evaluated alongside the primary GLD variant.
    pub compare: Vec<String>,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    pub confidence: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            saliency: SaliencyMethod::Sr,
            compare: Vec::new(),
            jobs: None,
            confidence: eval::DEFAULT_CONFIDENCE,
        }
    }
}

/// Scores every entry with every metric. Returns one item list per metric (in
/// manifest order) and the rows that failed to load or score.
pub fn score_entries(
    entries: &[ManifestEntry],
    metrics: &[Arc<dyn QualityMetric>],
    jobs: Option<usize>,
) -> Result<(Vec<Vec<ScoredItem>>, Vec<SkippedRow>)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| IqaError::InvalidArgument(format!("worker pool: {e}")))?;

    let scored: Vec<Result<Vec<f64>>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let pair = load_pair(&e.ref_path, &e.test_path)?;
                metrics.iter().map(|m| m.score(&pair)).collect()
            })
            .collect()
    });

    let mut per_metric = vec![Vec::with_capacity(entries.len()); metrics.len()];
    let mut skipped = Vec::new();
    for (entry, result) in entries.iter().zip(scored) {
        match result {
            Ok(scores) => {
                for ((items, metric), q) in per_metric.iter_mut().zip(metrics).zip(scores) {
                    items.push(ScoredItem {
                        record: QualityRecord {
                            q,
                            metric: metric.name().to_string(),
                            saliency_method: metric.saliency_method(),
                            ref_id: entry.ref_id.clone(),
                            test_id: entry.test_id.clone(),
                            subjective: Some(entry.subjective),
                            distortion_label: Some(entry.distortion.clone()),
                            database_label: Some(entry.database.clone()),
                        },
                        subjective_kind: entry.subjective_kind,
                        mapped: None,
                        residual: None,
                    });
                }
            }
            Err(err) => {
                log::warn!("line {}: {err}", entry.line);
                skipped.push(SkippedRow {
                    line: entry.line,
                    reason: err.to_string(),
                });
            }
        }
    }
    Ok((per_metric, skipped))
}

fn canonical_order(a: &ScoredItem, b: &ScoredItem) -> Ordering {
    (a.database(), a.distortion(), &a.record.ref_id, &a.record.test_id)
        .cmp(&(b.database(), b.distortion(), &b.record.ref_id, &b.record.test_id))
        .then(a.subjective().total_cmp(&b.subjective()))
        .then(a.record.q.total_cmp(&b.record.q))
}

/// Builds the per-database, per-distortion and averaged tables for one metric.
pub fn evaluate_method(method: &str, mut items: Vec<ScoredItem>) -> MethodReport {
    items.sort_by(canonical_order);

    let mut per_database = BTreeMap::new();
    let mut per_distortion = BTreeMap::new();
    let mut unevaluated = BTreeMap::new();

    let mut start = 0;
    while start < items.len() {
        let db = items[start].database().to_string();
        let end = start + items[start..].iter().take_while(|i| i.database() == db).count();
        let group = &mut items[start..end];

        let records: Vec<QualityRecord> = group.iter().map(|i| i.record.clone()).collect();
        per_distortion.insert(db.clone(), eval::group_by_distortion(&records));

        match evaluate_database(group) {
            Ok(result) => {
                per_database.insert(db, result);
            }
            Err(err) => {
                log::warn!("{method}: database `{db}` not evaluated: {err}");
                unevaluated.insert(db, err.to_string());
            }
        }
        start = end;
    }

    let rows: Vec<_> = per_database.values().map(|r: &DatabaseResult| r.metrics.clone()).collect();
    let averages = eval::aggregate(&rows).ok();
    MethodReport {
        method: method.to_string(),
        per_database,
        per_distortion,
        averages,
        unevaluated,
        records: items,
    }
}

fn evaluate_database(group: &mut [ScoredItem]) -> Result<DatabaseResult> {
    let kinds: BTreeSet<SubjectiveKind> = group.iter().map(|i| i.subjective_kind).collect();
    if kinds.len() != 1 {
        return Err(IqaError::DegenerateSeries(
            "database mixes MOS and DMOS ratings".into(),
        ));
    }
    let objective: Vec<f64> = group.iter().map(|i| i.record.q).collect();
    let subjective: Vec<f64> = group.iter().map(|i| i.subjective()).collect();
    let series = ScoreSeries::new(objective, subjective)?;
    let evaluation = eval::evaluate_series(&series)?;
    let signed = SignedCorrelations {
        srocc: eval::srocc(series.objective(), series.subjective())?,
        krocc: eval::krocc(series.objective(), series.subjective())?,
        plcc: eval::pearson(&evaluation.mapped, series.subjective()).unwrap_or(0.0),
    };
    for ((item, m), r) in group
        .iter_mut()
        .zip(&evaluation.mapped)
        .zip(&evaluation.residuals)
    {
        item.mapped = Some(*m);
        item.residual = Some(*r);
    }
    Ok(DatabaseResult {
        metrics: evaluation.row,
        signed,
        subjective_kind: *kinds.iter().next().expect("one kind"),
        fit: evaluation.fit,
    })
}

fn residuals_by_database(method: &MethodReport) -> BTreeMap<&str, Vec<f64>> {
    let mut out: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for item in &method.records {
        if let Some(r) = item.residual {
            out.entry(item.database()).or_default().push(r);
        }
    }
    out
}

/// Scores a manifest with the selected GLD variant (plus any comparison
/// metrics) and assembles the full report.
pub fn evaluate_manifest(manifest: &Manifest, options: &EvalOptions) -> Result<EvalReport> {
    if manifest.entries.is_empty() {
        return Err(IqaError::DegenerateSeries("manifest has no usable rows".into()));
    }
    let registry = MetricRegistry::default();
    let mut names = vec![format!("gld-{}", options.saliency)];
    for extra in &options.compare {
        let extra = extra.to_ascii_lowercase();
        if !names.contains(&extra) {
            names.push(extra);
        }
    }
    let metrics = names
        .iter()
        .map(|n| registry.get(n))
        .collect::<Result<Vec<_>>>()?;

    let (per_metric, mut skipped) = score_entries(&manifest.entries, &metrics, options.jobs)?;
    if per_metric[0].is_empty() {
        return Err(IqaError::DegenerateSeries("no pair could be scored".into()));
    }
    skipped.extend(manifest.skipped.iter().cloned());
    skipped.sort_by_key(|s| s.line);

    let methods: Vec<MethodReport> = names
        .iter()
        .zip(per_metric)
        .map(|(name, items)| evaluate_method(name, items))
        .collect();
    if methods[0].per_database.is_empty() {
        return Err(IqaError::DegenerateSeries(format!(
            "no database has {} or more usable, non-constant scores",
            eval::MIN_GROUP_SIZE
        )));
    }

    let mut f_matrix = BTreeMap::new();
    if methods.len() > 1 {
        let residuals: Vec<_> = methods.iter().map(residuals_by_database).collect();
        for db in methods[0].per_database.keys() {
            let sets: Option<Vec<Vec<f64>>> = residuals
                .iter()
                .map(|r| r.get(db.as_str()).cloned())
                .collect();
            if let Some(sets) = sets {
                f_matrix.insert(db.clone(), eval::f_test_matrix(&sets, options.confidence)?);
            }
        }
    }

    Ok(EvalReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        saliency_method: options.saliency,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        confidence: options.confidence,
        methods,
        f_matrix,
        skipped,
    })
}

/// Per-database F-test of the primary method of report A against that of report B.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FTestComparison {
    pub method_a: String,
    pub method_b: String,
    pub confidence: f64,
    pub verdicts: BTreeMap<String, i8>,
    /// Share of databases (in percent) where A is significantly better.
    pub improvement_pct: f64,
}

fn item_keys<'a>(method: &'a MethodReport, db: &str) -> Vec<(&'a str, &'a str, u64)> {
    let mut keys: Vec<_> = method
        .records
        .iter()
        .filter(|i| i.database() == db)
        .map(|i| {
            (
                i.record.ref_id.as_str(),
                i.record.test_id.as_str(),
                i.subjective().to_bits(),
            )
        })
        .collect();
    keys.sort_unstable();
    keys
}

pub fn compare_reports(a: &EvalReport, b: &EvalReport, confidence: f64) -> Result<FTestComparison> {
    let (ma, mb) = (a.primary()?, b.primary()?);
    let dbs_a: BTreeSet<&String> = ma.per_database.keys().collect();
    let dbs_b: BTreeSet<&String> = mb.per_database.keys().collect();
    if dbs_a != dbs_b {
        return Err(IqaError::IncompatibleReports(format!(
            "evaluated databases differ: {dbs_a:?} vs {dbs_b:?}"
        )));
    }
    let (ra, rb) = (residuals_by_database(ma), residuals_by_database(mb));
    let mut verdicts = BTreeMap::new();
    for db in dbs_a {
        if item_keys(ma, db) != item_keys(mb, db) {
            return Err(IqaError::IncompatibleReports(format!(
                "database `{db}` was scored on different image sets"
            )));
        }
        let verdict = f_test(&ra[db.as_str()], &rb[db.as_str()], confidence)?;
        verdicts.insert(db.clone(), verdict);
    }
    let better = verdicts.values().filter(|&&v| v == 1).count();
    let improvement_pct = if verdicts.is_empty() {
        0.0
    } else {
        100.0 * better as f64 / verdicts.len() as f64
    };
    Ok(FTestComparison {
        method_a: ma.method.clone(),
        method_b: mb.method.clone(),
        confidence,
        verdicts,
        improvement_pct,
    })
}
