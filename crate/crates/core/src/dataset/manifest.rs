//! CSV manifests describing a benchmark database:
//!
//! ```text
//! ref_path,test_path,subjective,subjective_kind,distortion,database
//! refs/bikes.bmp,jp2k/img1.bmp,63.0,DMOS,jp2k,LIVE
//! ```
//!
//! Paths are resolved relative to the manifest's directory. Fields are not
//! quoted, so paths containing commas cannot be expressed and are rejected.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{IqaError, Result};

pub const MANIFEST_HEADER: [&str; 6] = [
    "ref_path",
    "test_path",
    "subjective",
    "subjective_kind",
    "distortion",
    "database",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SubjectiveKind {
    /// Mean opinion score: higher is better.
    Mos,
    /// Differential mean opinion score: higher is worse.
    Dmos,
}

impl FromStr for SubjectiveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "MOS" => Ok(SubjectiveKind::Mos),
            "DMOS" => Ok(SubjectiveKind::Dmos),
            _ => Err(format!("subjective_kind must be MOS or DMOS, got `{s}`")),
        }
    }
}

impl fmt::Display for SubjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubjectiveKind::Mos => "MOS",
            SubjectiveKind::Dmos => "DMOS",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    /// Path as written in the manifest; used as the item identifier.
    pub ref_id: String,
    pub test_id: String,
    pub ref_path: PathBuf,
    pub test_path: PathBuf,
    pub subjective: f64,
    pub subjective_kind: SubjectiveKind,
    pub distortion: String,
    pub database: String,
    pub line: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    /// Rows dropped because an image path could not be opened.
    pub skipped: Vec<SkippedRow>,
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> IqaError {
    IqaError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IqaError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .quoting(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut manifest = Manifest::default();
    let mut saw_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if !saw_header {
            let header: Vec<&str> = record.iter().collect();
            if header != MANIFEST_HEADER {
                return Err(parse_error(
                    path,
                    line,
                    format!("expected header `{}`", MANIFEST_HEADER.join(",")),
                ));
            }
            saw_header = true;
            continue;
        }
        if record.len() != MANIFEST_HEADER.len() {
            return Err(parse_error(
                path,
                line,
                format!("expected 6 fields, found {}", record.len()),
            ));
        }
        let field = |i: usize| -> Result<&str> {
            let v = &record[i];
            if v.is_empty() {
                Err(parse_error(path, line, format!("missing {}", MANIFEST_HEADER[i])))
            } else {
                Ok(v)
            }
        };
        let subjective: f64 = field(2)?
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad subjective score `{}`", &record[2])))?;
        if !subjective.is_finite() {
            return Err(parse_error(path, line, "subjective score must be finite"));
        }
        let subjective_kind = field(3)?
            .parse()
            .map_err(|e: String| parse_error(path, line, e))?;
        let entry = ManifestEntry {
            ref_id: field(0)?.to_string(),
            test_id: field(1)?.to_string(),
            ref_path: base.join(field(0)?),
            test_path: base.join(field(1)?),
            subjective,
            subjective_kind,
            distortion: field(4)?.to_string(),
            database: field(5)?.to_string(),
            line,
        };
        match unreadable(&entry) {
            Some(reason) => {
                log::warn!("{}:{line}: skipping row: {reason}", path.display());
                manifest.skipped.push(SkippedRow { line, reason });
            }
            None => manifest.entries.push(entry),
        }
    }
    if !saw_header {
        return Err(parse_error(path, 1, "missing header"));
    }
    Ok(manifest)
}

fn unreadable(entry: &ManifestEntry) -> Option<String> {
    [&entry.ref_path, &entry.test_path]
        .into_iter()
        .find_map(|p| File::open(p).err().map(|e| format!("{}: {e}", p.display())))
}
