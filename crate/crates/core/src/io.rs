//! CSV and JSON input, and fixed-decimal table rendering.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class1::SubgroupPartition;
use crate::error::MobilityError;
use crate::profile::{MovementProfile, StatusVector};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("expected header `{expected}`")]
    MissingHeader { expected: &'static str },
    #[error("line {0}: not a number")]
    BadNumber(usize),
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {0}: wrong number of fields")]
    MalformedRow(usize),
    #[error("group file has no entry for id `{0}`")]
    UnknownGroupId(String),
    #[error("scenario `{label}` has {got} values, base has {expected}")]
    ScenarioLength { label: String, expected: usize, got: usize },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Mobility(#[from] MobilityError),
}

impl IoError {
    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Read { .. } => "Read",
            IoError::MissingHeader { .. } => "MissingHeader",
            IoError::BadNumber(_) => "BadNumber",
            IoError::DuplicateId { .. } => "DuplicateId",
            IoError::MalformedRow(_) => "MalformedRow",
            IoError::UnknownGroupId(_) => "UnknownGroupId",
            IoError::ScenarioLength { .. } => "ScenarioLength",
            IoError::Json(_) => "Json",
            IoError::Csv(_) => "Csv",
            IoError::Mobility(e) => e.kind(),
        }
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn read_to_string(path: &Path) -> IoResult<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|source| IoError::Read {
            path: path.display().to_string(),
            source,
        })?;
    Ok(s)
}

/// Reads records after checking the header; returns (line number, fields).
fn records(text: &str, header: &[&str], expected: &'static str) -> IoResult<Vec<(usize, Vec<String>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let h = rdr.headers().map_err(|e| IoError::Csv(e.to_string()))?;
    let found: Vec<&str> = h.iter().collect();
    if found != header {
        return Err(IoError::MissingHeader { expected });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IoError::Csv(e.to_string()))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(IoError::MalformedRow(line));
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

/// A profile with the row ids it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledProfile {
    pub ids: Vec<String>,
    pub profile: MovementProfile,
}

/// Parses `id,u,v` CSV text.
pub fn parse_profile_str(text: &str) -> IoResult<LabelledProfile> {
    let mut ids = Vec::new();
    let (mut u, mut v) = (Vec::new(), Vec::new());
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, f) in records(text, &["id", "u", "v"], "id,u,v")? {
        if seen.insert(f[0].clone(), line).is_some() {
            return Err(IoError::DuplicateId { line, id: f[0].clone() });
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| IoError::BadNumber(line));
        u.push(num(&f[1])?);
        v.push(num(&f[2])?);
        ids.push(f[0].clone());
    }
    let profile = MovementProfile::new(u, v)?;
    Ok(LabelledProfile { ids, profile })
}

/// Parses an `id,u,v` CSV file.
pub fn parse_profile_csv(path: impl AsRef<Path>) -> IoResult<LabelledProfile> {
    parse_profile_str(&read_to_string(path.as_ref())?)
}

/// Writes `id,u,v` CSV with shortest round-tripping float formatting.
pub fn write_profile_csv<W: Write>(out: W, ids: &[String], p: &MovementProfile) -> IoResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| IoError::Csv(e.to_string());
    w.write_record(["id", "u", "v"]).map_err(err)?;
    for (id, (u, v)) in ids.iter().zip(p.histories()) {
        w.write_record([id.clone(), format!("{u:?}"), format!("{v:?}")])
            .map_err(err)?;
    }
    w.flush().map_err(|e| IoError::Csv(e.to_string()))?;
    Ok(())
}

/// Parses `id,group` CSV text and aligns it with the profile's ids.
pub fn parse_groups_str(text: &str, ids: &[String]) -> IoResult<SubgroupPartition> {
    let mut map: HashMap<String, String> = HashMap::new();
    for (line, f) in records(text, &["id", "group"], "id,group")? {
        if map.insert(f[0].clone(), f[1].clone()).is_some() {
            return Err(IoError::DuplicateId { line, id: f[0].clone() });
        }
    }
    let labels = ids
        .iter()
        .map(|id| map.get(id).cloned().ok_or_else(|| IoError::UnknownGroupId(id.clone())))
        .collect::<IoResult<Vec<_>>>()?;
    Ok(SubgroupPartition::from_labels(&labels)?)
}

pub fn parse_groups_csv(path: impl AsRef<Path>, ids: &[String]) -> IoResult<SubgroupPartition> {
    parse_groups_str(&read_to_string(path.as_ref())?, ids)
}

/// A common origin and several labelled destinations, in declared order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub base: StatusVector,
    pub scenarios: IndexMap<String, StatusVector>,
}

#[derive(Deserialize, Serialize)]
struct ScenarioJson {
    base: Vec<f64>,
    scenarios: IndexMap<String, Vec<f64>>,
}

impl ScenarioSet {
    pub fn new(base: Vec<f64>, scenarios: IndexMap<String, Vec<f64>>) -> IoResult<Self> {
        let base = StatusVector::new(base)?;
        let mut out = IndexMap::new();
        for (label, v) in scenarios {
            if v.len() != base.len() {
                return Err(IoError::ScenarioLength {
                    label,
                    expected: base.len(),
                    got: v.len(),
                });
            }
            out.insert(label, StatusVector::new(v)?);
        }
        Ok(ScenarioSet { base, scenarios: out })
    }

    pub fn from_json(text: &str) -> IoResult<Self> {
        let raw: ScenarioJson = serde_json::from_str(text)?;
        Self::new(raw.base, raw.scenarios)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> IoResult<Self> {
        Self::from_json(&read_to_string(path.as_ref())?)
    }

    /// The profile moving from the base to scenario `label`.
    pub fn profile(&self, label: &str) -> Option<MovementProfile> {
        self.scenarios
            .get(label)
            .map(|v| MovementProfile::new(self.base.to_vec(), v.to_vec()).expect("validated lengths"))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.scenarios.keys().map(String::as_str)
    }
}

/// Output format for tables and results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// Measures by scenarios; `None` marks an undefined cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

/// Fixed-decimal rendering with `.` as separator; infinities print as
/// `inf`/`-inf` and a rounded negative zero prints without its sign.
pub fn format_value(x: f64, decimals: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

impl ResultTable {
    pub fn get(&self, row: &str, column: &str) -> Option<f64> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.columns.iter().position(|x| x == column)?;
        self.cells[r][c]
    }

    pub fn render(&self, format: Format, decimals: usize) -> String {
        let cell = |x: &Option<f64>| x.map(|v| format_value(v, decimals)).unwrap_or_else(|| "NA".into());
        match format {
            Format::Tsv => {
                let mut s = String::from("measure");
                for c in &self.columns {
                    s.push('\t');
                    s.push_str(c);
                }
                s.push('\n');
                for (r, row) in self.rows.iter().zip(&self.cells) {
                    s.push_str(r);
                    for x in row {
                        s.push('\t');
                        s.push_str(&cell(x));
                    }
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                // values go through the fixed-decimal formatter so output is
                // byte-stable; they are emitted as JSON strings for inf/NA
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .zip(&self.cells)
                    .map(|(r, row)| {
                        let mut m = serde_json::Map::new();
                        m.insert("measure".into(), r.clone().into());
                        for (c, x) in self.columns.iter().zip(row) {
                            m.insert(c.clone(), json_number(x, decimals));
                        }
                        serde_json::Value::Object(m)
                    })
                    .collect();
                let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
                let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
                s.push('\n');
                s
            }
        }
    }
}

/// A number rounded to `decimals`, or a string for non-finite values.
pub fn json_number(x: &Option<f64>, decimals: usize) -> serde_json::Value {
    match x {
        Some(v) if v.is_finite() => {
            let text = format_value(*v, decimals);
            serde_json::from_str::<serde_json::Value>(&text).unwrap_or_else(|_| text.into())
        }
        Some(v) => format_value(*v, decimals).into(),
        None => serde_json::Value::Null,
    }
}
