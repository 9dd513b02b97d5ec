use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};
use crate::HarnessError;

/// Field names dropped before hashing.
pub const VOLATILE_FIELDS: &[&str] = &["wall_ms"];

#[derive(Clone, Debug, Serialize)]
pub struct Report<R, S> {
    pub experiment: &'static str,
    pub config: ExperimentConfig,
    pub pass: bool,
    pub summary: S,
    pub rows: Vec<R>,
    pub wall_ms: f64,
    /// SHA-256 of the report with every `wall_ms` field removed.
    pub canonical_sha256: String,
}

fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for key in VOLATILE_FIELDS {
                map.remove(*key);
            }
            map.values_mut().for_each(strip_volatile);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

/// Hash of `value` serialized with sorted keys and volatile fields removed.
pub fn canonical_hash(value: &impl Serialize) -> Result<String, HarnessError> {
    let mut v = serde_json::to_value(value)?;
    strip_volatile(&mut v);
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(&v)?)))
}

impl<R: Serialize, S: Serialize> Report<R, S> {
    pub fn new(config: ExperimentConfig, rows: Vec<R>, summary: S, pass: bool, wall_ms: f64) -> Result<Self, HarnessError> {
        let experiment = config.experiment.id();
        let canonical_sha256 = canonical_hash(&json!({
            "experiment": experiment,
            "config": &config,
            "pass": pass,
            "summary": &summary,
            "rows": &rows,
        }))?;
        Ok(Report {
            experiment,
            config,
            pass,
            summary,
            rows,
            wall_ms,
            canonical_sha256,
        })
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn rows_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Everything except the rows, written next to a CSV report.
    pub fn meta_json(&self) -> Result<String, HarnessError> {
        let mut v = serde_json::to_value(self)?;
        if let Value::Object(map) = &mut v {
            map.remove("rows");
            map.insert("row_count".into(), self.rows.len().into());
        }
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    /// JSON: the whole report. CSV: the rows, plus `<out>.meta.json` when
    /// writing to a file. Without `out` the primary document is returned.
    pub fn emit(&self, out: Option<&Path>, format: Format) -> Result<Option<String>, HarnessError> {
        let primary = match format {
            Format::Json => self.to_json()?,
            Format::Csv => self.rows_csv()?,
        };
        let Some(path) = out else {
            return Ok(Some(primary));
        };
        fs::write(path, primary)?;
        if format == Format::Csv {
            fs::write(meta_path(path), self.meta_json()?)?;
        }
        Ok(None)
    }
}

pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[derive(Serialize)]
    struct Row {
        a: u32,
        b: Option<f64>,
        wall_ms: f64,
    }

    fn report(wall: f64) -> Report<Row, Value> {
        let rows = vec![
            Row { a: 1, b: None, wall_ms: wall },
            Row { a: 2, b: Some(0.5), wall_ms: 2.0 * wall },
        ];
        Report::new(
            ExperimentConfig::new(Experiment::Diameter),
            rows,
            json!({"k": 1, "wall_ms": wall}),
            true,
            wall,
        )
        .unwrap()
    }

    #[test]
    fn hash_ignores_wall_clock() {
        let a = report(1.0);
        let b = report(123.0);
        assert_eq!(a.canonical_sha256, b.canonical_sha256);
        assert_eq!(a.canonical_sha256.len(), 64);
        let mut c = ExperimentConfig::new(Experiment::Diameter);
        c.master_seed = 9;
        let other = Report::new(c, Vec::<Row>::new(), json!({}), true, 0.0).unwrap();
        assert_ne!(a.canonical_sha256, other.canonical_sha256);
    }

    #[test]
    fn csv_has_fixed_header() {
        let text = report(1.0).rows_csv().unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b,wall_ms"));
        assert_eq!(lines.next(), Some("1,,1.0"));
    }

    #[test]
    fn csv_writes_meta_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("rows.csv");
        assert!(report(1.0).emit(Some(&out), Format::Csv).unwrap().is_none());
        let meta: Value = serde_json::from_str(&fs::read_to_string(meta_path(&out)).unwrap()).unwrap();
        assert_eq!(meta["row_count"], 2);
        assert!(meta.get("rows").is_none());
        assert_eq!(meta["experiment"], "diameter");
    }
}
