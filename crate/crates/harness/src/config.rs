//! Experiment configuration.
//!
//! Two equivalent document formats are accepted.
//!
//! Key/value text (UTF-8):
//!
//! ```text
//! # comment to end of line
//! experiment = find-simple
//! seed = 42
//! n = 6
//! m = 3
//! d = 5
//! p = 0.5, 0.75, 0.9     # comma-separated lists
//! label = "quoted strings keep # and ,"
//! ```
//!
//! Each non-blank line is `key = value`. Keys match `[A-Za-z_][A-Za-z0-9_-]*`
//! and may appear once per document.
//!
//! JSON: a single object with the same keys. Values are numbers, strings,
//! booleans or flat arrays of those.
//!
//! The reserved keys `experiment`, `seed`, `out` and `format` select the
//! experiment, the master seed, the output path and `csv`/`json`. Every other
//! key is an experiment parameter; unknown parameters are rejected by name.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    OverlapCheck,
    FindSimple,
    Entropy,
    Compression,
    ClaimSweep,
    Deficiency,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::OverlapCheck,
        ExperimentKind::FindSimple,
        ExperimentKind::Entropy,
        ExperimentKind::Compression,
        ExperimentKind::ClaimSweep,
        ExperimentKind::Deficiency,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::OverlapCheck => "overlap-check",
            ExperimentKind::FindSimple => "find-simple",
            ExperimentKind::Entropy => "entropy",
            ExperimentKind::Compression => "compression",
            ExperimentKind::ClaimSweep => "claim-sweep",
            ExperimentKind::Deficiency => "deficiency",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::usage(format!("unknown experiment \"{s}\"")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(HarnessError::usage(format!("unknown format \"{s}\" (expected csv or json)"))),
        }
    }
}

/// Raw parameter value; typed interpretation happens when an experiment reads it.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(String),
    List(Vec<String>),
}

impl Value {
    fn items(&self) -> Vec<&str> {
        match self {
            Value::Scalar(s) => vec![s.as_str()],
            Value::List(v) => v.iter().map(String::as_str).collect(),
        }
    }
}

/// One `key = value` assignment and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    /// 1-based line in the source document, 0 for command-line overrides.
    pub line: usize,
}

impl Entry {
    pub fn new(key: impl Into<String>, value: Value) -> Self {
        Self {
            key: key.into(),
            value,
            line: 0,
        }
    }

    /// Parse a `key=value` command-line override.
    pub fn from_override(text: &str) -> Result<Self> {
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| HarnessError::usage(format!("override \"{text}\" is not key=value")))?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(HarnessError::usage(format!("invalid key \"{key}\"")));
        }
        let value = parse_text_value(value.trim()).map_err(HarnessError::Usage)?;
        Ok(Self::new(key, value))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: BTreeMap<String, Value>,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Parse and validate a complete configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg = build_config(parse_document(text)?, None)?;
    crate::experiments::Experiment::from_config(&cfg)?;
    Ok(cfg)
}

/// Split a document (key/value text or JSON object) into entries.
pub fn parse_document(text: &str) -> Result<Vec<Entry>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let entries = if text.trim_start().starts_with('{') {
        parse_json(text)?
    } else {
        parse_key_values(text)?
    };
    let mut seen = BTreeMap::new();
    for e in &entries {
        if let Some(first) = seen.insert(e.key.clone(), e.line) {
            return Err(HarnessError::Parse {
                line: e.line,
                message: format!("duplicate key \"{}\" (first set on line {first})", e.key),
            });
        }
    }
    Ok(entries)
}

/// Assemble a config from entries, later entries overriding earlier ones.
/// `experiment` (from the CLI subcommand) must agree with any `experiment` key.
pub fn build_config(entries: Vec<Entry>, experiment: Option<ExperimentKind>) -> Result<ExperimentConfig> {
    let mut merged: BTreeMap<String, Entry> = BTreeMap::new();
    for e in entries {
        merged.insert(e.key.clone(), e);
    }
    let mut reserved = |key: &str| -> Result<Option<String>> {
        match merged.remove(key) {
            None => Ok(None),
            Some(Entry {
                value: Value::Scalar(s),
                ..
            }) => Ok(Some(s)),
            Some(e) => Err(at_line(e.line, format!("\"{key}\" must be a single value"))),
        }
    };
    let named = reserved("experiment")?.map(|s| s.parse::<ExperimentKind>()).transpose()?;
    let experiment = match (experiment, named) {
        (Some(a), Some(b)) if a != b => {
            return Err(HarnessError::usage(format!(
                "config is for experiment {b} but {a} was requested"
            )))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(HarnessError::usage("missing required key \"experiment\"")),
    };
    let master_seed = match reserved("seed")? {
        Some(s) => parse_u64(&s).map_err(|e| HarnessError::usage(format!("seed: {e}")))?,
        None => 0,
    };
    let output = reserved("out")?.map(PathBuf::from);
    let format = reserved("format")?.map(|s| s.parse()).transpose()?.unwrap_or_default();
    let params = merged.into_iter().map(|(k, e)| (k, e.value)).collect();
    Ok(ExperimentConfig {
        experiment,
        params,
        master_seed,
        output,
        format,
    })
}

fn at_line(line: usize, message: String) -> HarnessError {
    if line == 0 {
        HarnessError::Usage(message)
    } else {
        HarnessError::Parse { line, message }
    }
}

fn valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_key_values(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| HarnessError::Parse {
            line,
            message: format!("expected key = value, found \"{content}\""),
        })?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(HarnessError::Parse {
                line,
                message: format!("invalid key \"{key}\""),
            });
        }
        let value = parse_text_value(value.trim()).map_err(|message| HarnessError::Parse { line, message })?;
        out.push(Entry {
            key: key.to_string(),
            value,
            line,
        });
    }
    Ok(out)
}

/// Drop a trailing `# ...` comment that is not inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_text_value(text: &str) -> std::result::Result<Value, String> {
    if text.is_empty() {
        return Err("empty value".into());
    }
    if let Some(inner) = text.strip_prefix('"') {
        return match inner.strip_suffix('"') {
            Some(s) if !s.contains('"') => Ok(Value::Scalar(s.to_string())),
            _ => Err(format!("unterminated string {text}")),
        };
    }
    if text.contains(',') {
        let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
        if items.iter().any(String::is_empty) {
            return Err(format!("empty list item in \"{text}\""));
        }
        return Ok(Value::List(items));
    }
    Ok(Value::Scalar(text.to_string()))
}

fn parse_json(text: &str) -> Result<Vec<Entry>> {
    let map: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| HarnessError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    let scalar = |key: &str, v: &serde_json::Value| -> Result<String> {
        match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            serde_json::Value::Bool(b) => Ok(b.to_string()),
            _ => Err(HarnessError::usage(format!("unsupported JSON value for key \"{key}\""))),
        }
    };
    let mut out = Vec::new();
    for (key, v) in &map {
        if !valid_key(key) {
            return Err(HarnessError::usage(format!("invalid key \"{key}\"")));
        }
        let value = match v {
            serde_json::Value::Array(items) => {
                Value::List(items.iter().map(|x| scalar(key, x)).collect::<Result<_>>()?)
            }
            other => Value::Scalar(scalar(key, other)?),
        };
        out.push(Entry {
            key: key.clone(),
            value,
            line: line_of_key(text, key),
        });
    }
    Ok(out)
}

fn line_of_key(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse::<u64>(),
    };
    parsed.or_else(|_| {
        let x: f64 = s.parse().map_err(|_| format!("\"{s}\" is not a non-negative integer"))?;
        if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53) {
            Ok(x as u64)
        } else {
            Err(format!("\"{s}\" is not a non-negative integer"))
        }
    })
}

/// Typed, consuming view of an experiment's parameters.
pub struct Params {
    experiment: ExperimentKind,
    map: BTreeMap<String, Value>,
}

impl Params {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            experiment: cfg.experiment,
            map: cfg.params.clone(),
        }
    }

    fn take<T>(&mut self, key: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(Value::Scalar(s)) => parse(&s)
                .map(Some)
                .map_err(|e| HarnessError::usage(format!("{key}: {e}"))),
            Some(Value::List(_)) => Err(HarnessError::usage(format!("{key}: expected a single value"))),
        }
    }

    fn take_list<T>(&mut self, key: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<Vec<T>>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => v
                .items()
                .into_iter()
                .map(|s| parse(s).map_err(|e| HarnessError::usage(format!("{key}: {e}"))))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    pub fn missing(&self, key: &str) -> HarnessError {
        HarnessError::usage(format!(
            "missing required key \"{key}\" for experiment {}",
            self.experiment
        ))
    }

    pub fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.take(key, parse_u64)
    }

    pub fn u32(&mut self, key: &str) -> Result<Option<u32>> {
        self.take(key, |s| {
            let v = parse_u64(s)?;
            u32::try_from(v).map_err(|_| format!("{v} is too large"))
        })
    }

    pub fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key, parse_f64)
    }

    pub fn string(&mut self, key: &str) -> Result<Option<String>> {
        self.take(key, |s| Ok(s.to_string()))
    }

    pub fn f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take_list(key, parse_f64)
    }

    pub fn u64_list(&mut self, key: &str) -> Result<Option<Vec<u64>>> {
        self.take_list(key, parse_u64)
    }

    pub fn string_list(&mut self, key: &str) -> Result<Option<Vec<String>>> {
        self.take_list(key, |s| Ok(s.to_string()))
    }

    pub fn required<T>(&self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| self.missing(key))
    }

    /// Fail on the first parameter nobody consumed.
    pub fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(key) => Err(HarnessError::usage(format!(
                "unknown key \"{key}\" for experiment {}",
                self.experiment
            ))),
        }
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("\"{s}\" is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("\"{s}\" is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_grammar() {
        let doc = "# header\nexperiment = entropy\n\nseed = 7  # trailing\np = 0.5, 1\nlabel = \"a # b, c\"\n";
        let entries = parse_document(doc).unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(entries[2].value, Value::List(vec!["0.5".into(), "1".into()]));
        assert_eq!(entries[2].line, 5);
        assert_eq!(entries[3].value, Value::Scalar("a # b, c".into()));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_document("experiment = entropy\nthis line is wrong\n") {
            Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_document("a = 1\nb = 2\na = 3\n") {
            Err(HarnessError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("\"a\""));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_document("x = \"open\n"), Err(HarnessError::Parse { line: 1, .. })));
        assert!(matches!(parse_document("{\n\"n\": 4,\n}"), Err(HarnessError::Parse { line: 3, .. })));
    }

    #[test]
    fn json_matches_key_values() {
        let kv = parse_document("experiment = compression\nseed = 3\np = 0.9\nk = 12\nrates = 0.2, 0.7\n").unwrap();
        let js = parse_document(r#"{"experiment": "compression", "seed": 3, "p": 0.9, "k": 12, "rates": [0.2, 0.7]}"#).unwrap();
        let a = build_config(kv, None).unwrap();
        let b = build_config(js, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.master_seed, 3);
        assert_eq!(a.experiment, ExperimentKind::Compression);
    }

    #[test]
    fn experiment_selection() {
        let entries = parse_document("seed = 1\n").unwrap();
        assert!(build_config(entries.clone(), None).is_err());
        assert_eq!(
            build_config(entries, Some(ExperimentKind::Entropy)).unwrap().experiment,
            ExperimentKind::Entropy
        );
        let entries = parse_document("experiment = entropy\n").unwrap();
        assert!(build_config(entries, Some(ExperimentKind::FindSimple)).is_err());
    }

    #[test]
    fn overrides_win() {
        let mut entries = parse_document("experiment = entropy\nseed = 1\np = 0.5\n").unwrap();
        entries.push(Entry::from_override("p=0.25,0.75").unwrap());
        entries.push(Entry::new("seed", Value::Scalar("9".into())));
        let cfg = build_config(entries, None).unwrap();
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.params["p"], Value::List(vec!["0.25".into(), "0.75".into()]));
        assert!(Entry::from_override("novalue").is_err());
    }

    #[test]
    fn typed_accessors() {
        let cfg = build_config(
            parse_document("experiment = find-simple\nn = 4\nm = 2.0\nd = x\n").unwrap(),
            None,
        )
        .unwrap();
        let mut p = Params::new(&cfg);
        assert_eq!(p.u32("n").unwrap(), Some(4));
        assert_eq!(p.u32("m").unwrap(), Some(2));
        assert!(p.u64("d").is_err());
        assert_eq!(p.u64("absent").unwrap(), None);
        p.finish().unwrap();

        let mut p = Params::new(&cfg);
        p.u32("n").unwrap();
        let err = p.finish().unwrap_err().to_string();
        assert!(err.contains("\"d\""), "{err}");
    }
}
