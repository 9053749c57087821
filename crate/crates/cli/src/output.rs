//! File output: write-then-rename, CSV rendering and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{hex, RunConfig};
use crate::error::{CliError, Result};
use crate::experiment::GridLevel;

/// Writes `bytes` to a sibling temp file and renames it over `path`, so
/// readers only ever see a complete file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(CliError::io(path))
}

/// Renders rows with a header line. An empty slice still gets the header
/// from `header`.
pub fn csv_bytes<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(CliError::csv(path))?;
    for r in rows {
        w.serialize(r).map_err(CliError::csv(path))?;
    }
    w.into_inner().map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.into_error() })
}

pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    write_atomic(path, &csv_bytes(path, header, rows)?)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(CliError::io(path))?;
    Ok(hex(&Sha256::digest(bytes)))
}

#[derive(Debug, Serialize)]
pub struct FixtureChecksums {
    pub path: PathBuf,
    pub fcidump_sha256: String,
    pub meta_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub config_sha256: String,
    pub config: &'a RunConfig,
    pub fixture: FixtureChecksums,
    pub p_grid: &'a [GridLevel],
    pub outputs: Vec<String>,
}

impl<'a> Manifest<'a> {
    pub fn new(command: &'a str, config: &'a RunConfig, p_grid: &'a [GridLevel], outputs: Vec<String>) -> Result<Self> {
        let dir = &config.fixture;
        let fixture = FixtureChecksums {
            path: dir.clone(),
            fcidump_sha256: sha256_file(&dir.join("FCIDUMP"))?,
            meta_sha256: sha256_file(&dir.join("meta.json"))?,
        };
        Ok(Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: config.sha256(),
            config,
            fixture,
            p_grid,
            outputs,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}
