//! Deterministic table emission.
//!
//! Floats are written with 17 significant digits ({:.16e}), which
//! round-trips f64 exactly, so repeated runs with the same configuration
//! emit identical bytes regardless of how the sweep was scheduled. JSON
//! mirrors the same rows as an array of objects.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    fn to_csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => fmt_float(*v),
            Value::Text(v) => v.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(v) => serde_json::json!(v),
            Value::Float(v) => serde_json::json!(v),
            Value::Text(v) => serde_json::json!(v),
        }
    }
}

/// 17-significant-digit scientific notation; exact f64 round trip.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Command name, parameters, and units for the sidecar.
    pub metadata: serde_json::Value,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            let line: Vec<String> = row.iter().map(Value::to_csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, v) in self.header.iter().zip(row) {
                    obj.insert((*name).to_string(), v.to_json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": self.metadata,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (csv or json)")),
        }
    }
}

/// Where the table goes: stdout or a file (with a `.meta.json` sidecar
/// documenting parameters and units).
#[derive(Debug, Clone)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn resolve(out: Option<&str>, out_dir: Option<&Path>) -> Self {
        match out {
            None | Some("-") => Sink::Stdout,
            Some(path) => {
                let p = PathBuf::from(path);
                if p.is_relative() {
                    if let Some(dir) = out_dir {
                        return Sink::File(dir.join(p));
                    }
                }
                Sink::File(p)
            }
        }
    }

    pub fn write(&self, table: &Table, format: Format) -> std::io::Result<()> {
        let body = match format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        };
        match self {
            Sink::Stdout => {
                std::io::stdout().write_all(body.as_bytes())?;
            }
            Sink::File(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent)?;
                    }
                }
                fs::write(path, body)?;
                // Units and parameters ride in a sidecar next to the data
                // so the data file keeps its single header row.
                let mut meta = path.as_os_str().to_owned();
                meta.push(".meta.json");
                let mut doc =
                    serde_json::to_string_pretty(&table.metadata).expect("json serialization");
                doc.push('\n');
                fs::write(PathBuf::from(meta), doc)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_exact_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-7, 6.02e23, 0.0] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_shape() {
        let t = Table {
            header: vec!["a", "b"],
            rows: vec![
                vec![Value::Int(1), Value::Float(0.5)],
                vec![Value::Int(2), Value::Text("x".into())],
            ],
            metadata: serde_json::json!({}),
        };
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,b");
        assert_eq!(lines[1], "1,5.0000000000000000e-1");
        assert_eq!(lines[2], "2,x");
    }
}
