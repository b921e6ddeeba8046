//! Artifacts, run manifests and their serialization.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Environment variable that, when set, is prefixed to relative `--out` paths.
pub const OUT_DIR_ENV: &str = "LMBD_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A single table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(format_float(*v)),
            Cell::Bool(v) => json!(v),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// What a subcommand produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Table(Table),
    Report(Value),
}

impl Artifact {
    pub fn report<T: Serialize>(value: &T) -> Self {
        Artifact::Report(serde_json::to_value(value).expect("library types serialize"))
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: Map::new(),
            seed: None,
            version: format!("lmbd {}", env!("CARGO_PKG_VERSION")),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.into(),
            serde_json::to_value(value).expect("plain value"),
        );
        self
    }
}

/// Renders an artifact in `format`, headed by its manifest.
pub fn render(
    manifest: &RunManifest,
    artifact: &Artifact,
    format: Format,
) -> Result<String, String> {
    let manifest_json = serde_json::to_value(manifest).expect("manifest serializes");
    match (artifact, format) {
        (Artifact::Table(table), Format::Csv) => {
            let mut out = format!(
                "# manifest {}\n",
                serde_json::to_string(&manifest_json).unwrap()
            );
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(vec![]);
            writer
                .write_record(&table.header)
                .map_err(|e| e.to_string())?;
            for row in &table.rows {
                writer
                    .write_record(row.iter().map(Cell::csv))
                    .map_err(|e| e.to_string())?;
            }
            let body = writer.into_inner().map_err(|e| e.to_string())?;
            out.push_str(&String::from_utf8(body).expect("ascii csv"));
            Ok(out)
        }
        (Artifact::Table(table), Format::Json) => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    Value::Object(
                        table
                            .header
                            .iter()
                            .map(|h| h.to_string())
                            .zip(row.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect();
            Ok(pretty(
                &json!({ "manifest": manifest_json, "result": rows }),
            ))
        }
        (Artifact::Report(value), Format::Json) => Ok(pretty(
            &json!({ "manifest": manifest_json, "result": value }),
        )),
        (Artifact::Report(_), Format::Csv) => Err(format!(
            "`{}` produces a report; use --format json",
            manifest.command
        )),
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value");
    s.push('\n');
    s
}

/// Resolves `--out` against the optional output-directory override.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(contents.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_has_manifest_header() {
        let table = Table {
            header: vec!["y", "p"],
            rows: vec![vec![Cell::Int(0), Cell::Float(0.5)]],
        };
        let text = render(
            &RunManifest::new("pmf").param("n", 1),
            &Artifact::Table(table),
            Format::Csv,
        )
        .unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# manifest {"));
        assert_eq!(lines[1], "y,p");
        assert_eq!(lines[2], "0,5.0000000000000000e-1");
    }

    #[test]
    fn reports_refuse_csv() {
        let r = Artifact::Report(json!({"a": 1}));
        assert!(render(&RunManifest::new("moments"), &r, Format::Csv).is_err());
    }
}
