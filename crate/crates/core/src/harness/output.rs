//! Deterministic run outputs: numeric tables (CSV or JSON), a summary of
//! named metrics, and a manifest digesting every file the run produced.
//!
//! Nothing here records timestamps, hostnames, or absolute paths, so a
//! rerun with the same configuration and seed reproduces every byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// On-disk format for numeric tables. Summaries and manifests are always
/// JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format {other:?}, expected csv or json"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

/// Write a numeric table to `dir/stem.{csv,json}` and return the path.
///
/// CSV: comma separators, one header row, `.` decimal point, LF line
/// endings. JSON: an object with `columns` and `rows` arrays. Both use
/// the shortest decimal text that round-trips each value, so files are
/// byte-stable across runs.
pub fn write_table(
    dir: &Path,
    stem: &str,
    columns: &[&str],
    rows: &[Vec<f64>],
    format: OutputFormat,
) -> Result<PathBuf> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != columns.len() {
            return Err(Error::Config(format!(
                "table {stem}: row {i} has {} cells for {} columns",
                row.len(),
                columns.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "table {stem}: non-finite value in row {i}"
            )));
        }
    }
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let text = match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in rows {
                let mut first = true;
                for v in row {
                    if !first {
                        out.push(',');
                    }
                    // f64 Display: '.' decimal point, shortest round-trip form.
                    let _ = write!(out, "{v}");
                    first = false;
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let value = serde_json::json!({
                "columns": columns,
                "rows": rows,
            });
            let mut text = serde_json::to_string_pretty(&value)
                .map_err(|e| Error::Numeric(format!("table {stem}: {e}")))?;
            text.push('\n');
            text
        }
    };
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Per-run summary: the scenario name, the seed that fixed every random
/// draw, named scalar metrics, and any warnings the scenario raised.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl RunSummary {
    pub fn new(scenario: &str, seed: u64) -> Self {
        RunSummary {
            scenario: scenario.to_string(),
            seed,
            metrics: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }
}

/// One manifest row: file name (relative to the run directory), size, and
/// SHA-256 content digest.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Content manifest for a finished run, sorted by file name.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

/// Everything a scenario run hands back to callers: the summary that was
/// written to `summary.json`, the manifest from `manifest.json`, and the
/// paths of all produced files.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub summary: RunSummary,
    pub manifest: Manifest,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    /// Look up a metric that the scenario is contracted to emit.
    pub fn metric(&self, key: &str) -> Result<f64> {
        self.summary
            .metrics
            .get(key)
            .copied()
            .ok_or_else(|| Error::Numeric(format!("summary metric {key:?} missing")))
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Write `summary.json` and `manifest.json` into `out_dir`, digesting the
/// summary and every file in `files`. The manifest lists itself by name
/// only (its own digest would be self-referential).
pub fn finalize_run(
    out_dir: &Path,
    summary: RunSummary,
    mut files: Vec<PathBuf>,
) -> Result<RunReport> {
    for (key, value) in &summary.metrics {
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "summary metric {key:?} is not finite"
            )));
        }
    }
    let summary_path = out_dir.join("summary.json");
    let mut summary_text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Numeric(format!("summary: {e}")))?;
    summary_text.push('\n');
    fs::write(&summary_path, summary_text).map_err(|e| io_err(&summary_path, e))?;
    files.push(summary_path);

    let mut entries = Vec::with_capacity(files.len());
    for path in &files {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| Error::Config(format!("unnameable output file {}", path.display())))?
            .to_string();
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        entries.push(ManifestEntry {
            name,
            bytes: bytes.len() as u64,
            sha256: sha256_hex(&bytes),
        });
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    for pair in entries.windows(2) {
        if pair[0].name == pair[1].name {
            return Err(Error::Config(format!(
                "duplicate output file name {:?}",
                pair[0].name
            )));
        }
    }
    let manifest = Manifest { files: entries };
    let manifest_path = out_dir.join("manifest.json");
    let mut manifest_text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Numeric(format!("manifest: {e}")))?;
    manifest_text.push('\n');
    fs::write(&manifest_path, manifest_text).map_err(|e| io_err(&manifest_path, e))?;
    files.push(manifest_path);

    Ok(RunReport {
        summary,
        manifest,
        out_dir: out_dir.to_path_buf(),
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("dropsim-output-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn csv_layout_is_exact() {
        let dir = temp_dir("csv");
        let path = write_table(
            &dir,
            "demo",
            &["x", "y"],
            &[vec![1.0, 2.5], vec![-0.125, 30.0]],
            OutputFormat::Csv,
        )
        .unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "x,y\n1,2.5\n-0.125,30\n");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn json_table_round_trips() {
        let dir = temp_dir("json");
        let path = write_table(
            &dir,
            "demo",
            &["x"],
            &[vec![0.1], vec![0.2]],
            OutputFormat::Json,
        )
        .unwrap();
        let value: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(value["columns"][0], "x");
        assert_eq!(value["rows"][1][0], 0.2);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn non_finite_cells_rejected() {
        let dir = temp_dir("nan");
        let err = write_table(&dir, "bad", &["x"], &[vec![f64::NAN]], OutputFormat::Csv)
            .unwrap_err();
        assert_eq!(err.exit_code(), 4);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn digest_matches_known_vector() {
        // SHA-256 of the empty string and of "abc" are fixed by the standard.
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn finalize_digests_every_file() {
        let dir = temp_dir("finalize");
        let table = write_table(
            &dir,
            "data",
            &["x"],
            &[vec![1.0]],
            OutputFormat::Csv,
        )
        .unwrap();
        let mut summary = RunSummary::new("demo", 9);
        summary.metric("answer", 42.0);
        let report = finalize_run(&dir, summary, vec![table]).unwrap();
        let names: Vec<&str> = report.manifest.files.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["data.csv", "summary.json"]);
        let expected = sha256_hex(&fs::read(dir.join("data.csv")).unwrap());
        assert_eq!(report.manifest.files[0].sha256, expected);
        assert!(dir.join("manifest.json").is_file());
        assert_eq!(report.metric("answer").unwrap(), 42.0);
        assert!(report.metric("missing").is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
