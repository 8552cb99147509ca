//! Output directories, CSV / JSON / JSONL writers and the run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::defaults::{Defaults, DEFAULTS_TOML};
use crate::error::{LabError, Result};
use crate::plan::{ExperimentPlan, PlanKind};

/// `<out>/<kind>/<timestamp>/`, created on construction.
#[derive(Debug, Clone)]
pub struct RunDir {
    root: PathBuf,
    files: Vec<PathBuf>,
}

impl RunDir {
    pub fn create(out: &Path, kind: PlanKind, stamp: &str) -> Result<Self> {
        let root = out.join(kind.as_str()).join(stamp);
        fs::create_dir_all(&root).map_err(LabError::io(&root))?;
        Ok(Self {
            root,
            files: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    /// Registers a file written by someone else (e.g. a worker).
    pub fn register(&mut self, relative: impl Into<PathBuf>) {
        self.files.push(relative.into());
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.root.join(name);
        write_json(&path, value)?;
        self.register(name);
        Ok(path)
    }

    pub fn write_csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<PathBuf> {
        let path = self.root.join(name);
        write_csv(&path, rows)?;
        self.register(name);
        Ok(path)
    }

    pub fn write_jsonl<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<PathBuf> {
        let path = self.root.join(name);
        write_jsonl(&path, rows)?;
        self.register(name);
        Ok(path)
    }
}

/// Timestamp used for run directories, e.g. `20260101T120000.123Z`.
pub fn timestamp() -> String {
    chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string()
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(LabError::io(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(LabError::io(path))?;
    w.flush().map_err(LabError::io(path))
}

/// RFC 4180 CSV with a header row taken from the field names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(LabError::io(path))
}

/// One JSON document per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(LabError::io(path))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n").map_err(LabError::io(path))?;
    }
    w.flush().map_err(LabError::io(path))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: PathBuf,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to reproduce the artifacts of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub plan: ExperimentPlan,
    pub seed: u64,
    pub defaults_version: u32,
    /// The defaults file verbatim.
    pub defaults: String,
    pub workers: usize,
    pub started_at: String,
    pub wall_time_s: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub files: Vec<FileRecord>,
}

impl Manifest {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        plan: &ExperimentPlan,
        defaults: &Defaults,
        workers: usize,
        started_at: String,
        wall_time_s: f64,
        passed: bool,
        failures: Vec<String>,
        dir: &RunDir,
    ) -> Result<Self> {
        let mut files = Vec::new();
        for rel in dir.files() {
            let path = dir.path().join(rel);
            let meta = fs::metadata(&path).map_err(LabError::io(&path))?;
            files.push(FileRecord {
                path: rel.clone(),
                bytes: meta.len(),
                sha256: sha256_file(&path)?,
            });
        }
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            core_version: hartree_core_version().to_string(),
            plan: plan.clone(),
            seed: plan.seed,
            defaults_version: defaults.version,
            defaults: DEFAULTS_TOML.to_string(),
            workers,
            started_at,
            wall_time_s,
            passed,
            failures,
            files,
        })
    }

    /// Written last, by the coordinator.
    pub fn write(&self, dir: &RunDir) -> Result<PathBuf> {
        let path = dir.path().join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }
}

fn hartree_core_version() -> &'static str {
    // both crates share the workspace version
    env!("CARGO_PKG_VERSION")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        eps: f64,
        label: &'static str,
    }

    #[test]
    fn csv_is_crlf_with_header_and_quoting() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_csv(
            &path,
            &[
                Row { eps: 0.5, label: "a" },
                Row {
                    eps: 0.25,
                    label: "b, \"c\"",
                },
            ],
        )
        .unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "eps,label\r\n0.5,a\r\n0.25,\"b, \"\"c\"\"\"\r\n");
    }

    #[test]
    fn jsonl_has_one_document_per_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.jsonl");
        write_jsonl(&path, &[Row { eps: 1.0, label: "a" }, Row { eps: 2.0, label: "b" }]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        for l in lines {
            serde_json::from_str::<serde_json::Value>(l).unwrap();
        }
    }
}
