use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::{TOOL_NAME, TOOL_VERSION};

/// Formats a float for CSV bodies: shortest round-trip exponent form, which
/// is deterministic byte-for-byte.
pub fn fmt_f(v: f64) -> String {
    format!("{v:e}")
}

/// Cell in a CSV row.
pub enum Cell {
    F(f64),
    I(i64),
    U(u64),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => fmt_f(*v),
            Cell::I(v) => v.to_string(),
            Cell::U(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

/// Writes a CSV file with '#'-prefixed provenance comments, a header line and
/// LF endings. The preamble always starts with the tool version so every
/// emitted number is traceable to its producer.
pub fn write_csv(
    path: &Path,
    scenario: &str,
    seed: u64,
    column_docs: &[(&str, &str)],
    rows: &[Vec<Cell>],
) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "# {TOOL_NAME} {TOOL_VERSION}");
    let _ = writeln!(text, "# scenario: {scenario} seed: {seed}");
    for (name, doc) in column_docs {
        let _ = writeln!(text, "# column {name}: {doc}");
    }
    let header: Vec<&str> = column_docs.iter().map(|(name, _)| *name).collect();
    let _ = writeln!(text, "{}", header.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), column_docs.len());
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        let _ = writeln!(text, "{}", line.join(","));
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Outcome of one embedded scenario assertion.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn check(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Everything a scenario run leaves behind besides its artifact files.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    /// Scalar metrics, also used as sweep columns (stable order).
    pub summary: Vec<(String, f64)>,
    pub assertions: Vec<Assertion>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|(name, _)| name == key)
            .map(|(_, v)| *v)
    }
}

/// Manifest describing a finished run. The timestamp lives here and only
/// here, so the data artifacts stay byte-identical across reruns.
#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: &'static str,
    pub seed: u64,
    pub params: serde_json::Value,
    /// Unit conventions and SI conversion factors used by this scenario.
    pub units: serde_json::Value,
    pub summary: Vec<(String, f64)>,
    pub assertions: Vec<Assertion>,
    pub files: Vec<PathBuf>,
    pub generated_unix_ms: u128,
}

pub fn write_manifest(
    dir: &Path,
    scenario: &crate::config::Scenario,
    seed: u64,
    units: serde_json::Value,
    report: &RunReport,
) -> anyhow::Result<()> {
    let manifest = Manifest {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        scenario: scenario.name(),
        seed,
        params: scenario.params_json(),
        units,
        summary: report.summary.clone(),
        assertions: report.assertions.clone(),
        files: report.files.clone(),
        generated_unix_ms: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
    };
    write_json(&dir.join("manifest.json"), &manifest)
}
