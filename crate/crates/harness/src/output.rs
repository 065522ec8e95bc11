use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::config::Format;
use crate::error::{HarnessError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Display labels attached to proxy metrics in JSON output.
pub const METRIC_LABELS: &[(&str, &str)] = &[
    ("H_hat_bound", "Ĥ proxy upper bound"),
    ("K_hat_sampled", "K̂ proxy (canonical encoding length, bits)"),
    ("K_hat", "K̂ proxy (prefix-free string encoding length, bits)"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    UInt(u64),
    /// Counts that may exceed `u64` (coding ranks).
    Big(u128),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Field {
    pub fn opt_real(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Real)
    }

    pub fn opt_uint(v: Option<u64>) -> Self {
        v.map_or(Field::Empty, Field::UInt)
    }

    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Big(v) => v.to_string(),
            Field::Real(v) => format_g12(*v),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Field::Int(v) => json!(v),
            Field::UInt(v) => json!(v),
            Field::Big(v) => match u64::try_from(*v) {
                Ok(small) => json!(small),
                Err(_) => json!(v.to_string()),
            },
            Field::Real(v) => format_g12(*v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Json::Null, Json::Number),
            Field::Text(s) => json!(s),
            Field::Bool(b) => json!(b),
            Field::Empty => Json::Null,
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::UInt(v)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::UInt(v as u64)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Param,
    Metric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub name: String,
    pub role: Role,
    pub value: Field,
}

/// One self-describing output row: every effective parameter, the row seed,
/// the metrics, the tool version and the wall time.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub seed: u64,
    /// Cells in CSV column order; `seed` is included wherever the schema puts it.
    pub cells: Vec<Cell>,
    pub version: &'static str,
    pub wall_time_s: f64,
}

impl ResultRow {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            cells: Vec::new(),
            version: VERSION,
            wall_time_s: 0.0,
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<Field>) -> Self {
        self.cells.push(Cell {
            name: name.to_string(),
            role: Role::Param,
            value: value.into(),
        });
        self
    }

    pub fn metric(mut self, name: &str, value: impl Into<Field>) -> Self {
        self.cells.push(Cell {
            name: name.to_string(),
            role: Role::Metric,
            value: value.into(),
        });
        self
    }

    pub fn get(&self, name: &str) -> Option<&Field> {
        self.cells.iter().find(|c| c.name == name).map(|c| &c.value)
    }

    pub fn real(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            Field::Real(v) => Some(*v),
            Field::UInt(v) => Some(*v as f64),
            Field::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = self.cells.iter().map(|c| c.name.clone()).collect();
        h.push("version".into());
        h.push("wall_time_s".into());
        h
    }

    fn to_json(&self) -> Json {
        let mut params = Map::new();
        let mut metrics = Map::new();
        for c in &self.cells {
            let target = match c.role {
                Role::Param => &mut params,
                Role::Metric => &mut metrics,
            };
            target.insert(c.name.clone(), c.value.json());
        }
        let labels: Map<String, Json> = METRIC_LABELS
            .iter()
            .filter(|(k, _)| metrics.contains_key(*k))
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        let mut obj = Map::new();
        obj.insert("experiment".into(), json!(self.experiment));
        obj.insert("seed".into(), json!(self.seed));
        obj.insert("params".into(), Json::Object(params));
        obj.insert("metrics".into(), Json::Object(metrics));
        if !labels.is_empty() {
            obj.insert("metric_labels".into(), Json::Object(labels));
        }
        obj.insert("version".into(), json!(self.version));
        obj.insert("wall_time_s".into(), Field::Real(self.wall_time_s).json());
        Json::Object(obj)
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `1e-5 ..= 1e12`.
pub fn format_g12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn render(rows: &[ResultRow], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => render_csv(rows),
        Format::Json => {
            let doc = Json::Array(rows.iter().map(ResultRow::to_json).collect());
            let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| HarnessError::Core(qel_core::QelError::ContractViolation(e.to_string())))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

fn render_csv(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| HarnessError::io("csv buffer", std::io::Error::other(e));
    if let Some(first) = rows.first() {
        let header = first.header();
        w.write_record(&header).map_err(csv_err)?;
        for r in rows {
            if r.header() != header {
                return Err(HarnessError::Core(qel_core::QelError::ContractViolation(format!(
                    "row columns differ from header in experiment {}",
                    r.experiment
                ))));
            }
            let mut record: Vec<String> = r.cells.iter().map(|c| c.value.csv()).collect();
            record.push(r.version.to_string());
            record.push(format_g12(r.wall_time_s));
            w.write_record(&record).map_err(csv_err)?;
        }
    }
    w.into_inner()
        .map_err(|e| HarnessError::io("csv buffer", std::io::Error::other(e.to_string())))
}

/// Write `bytes` to `path` via a temporary file in the same directory and an
/// atomic rename, so the target is either absent, the old file, or complete.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir.display(), e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| HarnessError::io(tmp.path().display(), e))?;
    tmp.persist(path)
        .map_err(|e| HarnessError::io(path.display(), e.error))?;
    Ok(())
}
