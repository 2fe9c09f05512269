//! Evaluation reports: a JSON document of key-indexed tables, plus an optional
//! flat CSV of the per-image records.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::manifest::{SkippedRow, SubjectiveKind};
use crate::distortion::QualityRecord;
use crate::error::{IqaError, Result};
use crate::eval::{Averages, DistortionRow, LogisticFit, MetricRow};
use crate::saliency::SaliencyMethod;

/// One manifest row scored by one metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredItem {
    #[serde(flatten)]
    pub record: QualityRecord,
    pub subjective_kind: SubjectiveKind,
    /// Logistic-mapped objective score; absent when the database was not evaluable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapped: Option<f64>,
    /// `subjective - mapped`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl ScoredItem {
    pub fn database(&self) -> &str {
        self.record.database_label.as_deref().unwrap_or("")
    }

    pub fn distortion(&self) -> &str {
        self.record.distortion_label.as_deref().unwrap_or("")
    }

    pub fn subjective(&self) -> f64 {
        self.record.subjective.unwrap_or(f64::NAN)
    }
}

/// Signed correlations, before the absolute-value reporting convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedCorrelations {
    pub srocc: f64,
    pub krocc: f64,
    pub plcc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatabaseResult {
    pub metrics: MetricRow,
    pub signed: SignedCorrelations,
    pub subjective_kind: SubjectiveKind,
    pub fit: LogisticFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub per_database: BTreeMap<String, DatabaseResult>,
    /// Database label to per-distortion SROCC rows.
    pub per_distortion: BTreeMap<String, Vec<DistortionRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averages: Option<Averages>,
    /// Databases that could not be evaluated, with the reason.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unevaluated: BTreeMap<String, String>,
    pub records: Vec<ScoredItem>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tool_version: String,
    pub saliency_method: SaliencyMethod,
    /// Seconds since the Unix epoch at report creation.
    pub timestamp: u64,
    pub confidence: f64,
    pub methods: Vec<MethodReport>,
    /// Per database, `f_matrix[db][i][j]` is the verdict of method `i` against `j`.
    /// Present only when more than one method was evaluated.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub f_matrix: BTreeMap<String, Vec<Vec<i8>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedRow>,
}

impl EvalReport {
    pub fn primary(&self) -> Result<&MethodReport> {
        self.methods
            .first()
            .ok_or_else(|| IqaError::IncompatibleReports("report has no methods".into()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn write_report(path: impl AsRef<Path>, report: &EvalReport) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report.to_json()?).map_err(|e| IqaError::io(path, e))
}

pub fn read_report(path: impl AsRef<Path>) -> Result<EvalReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IqaError::io(path, e))?;
    EvalReport::from_json(&text)
}

/// Flat per-image CSV across all methods in the report.
pub fn write_records_csv(path: impl AsRef<Path>, report: &EvalReport) -> Result<()> {
    let path = path.as_ref();
    let io = |e| IqaError::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(
        out,
        "method,database,distortion,ref_id,test_id,subjective,subjective_kind,q,mapped,residual"
    )
    .map_err(io)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for m in &report.methods {
        for item in &m.records {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                m.method,
                item.database(),
                item.distortion(),
                item.record.ref_id,
                item.record.test_id,
                item.subjective(),
                item.subjective_kind,
                item.record.q,
                opt(item.mapped),
                opt(item.residual),
            )
            .map_err(io)?;
        }
    }
    out.flush().map_err(io)
}
