use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Formats a float so that parsing it back yields the same bits.
pub(crate) fn num(v: f64) -> String {
    format!("{v}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
    pub config_path: String,
    pub config_sha256: String,
    /// Fully resolved parameters, defaults included.
    pub parameters: serde_json::Value,
    pub files: Vec<FileRecord>,
}

/// Collects the files written by one command and writes the manifest last.
pub(crate) struct RunOutput {
    dir: PathBuf,
    command: &'static str,
    started: String,
    config_path: String,
    config_sha256: String,
    files: Vec<FileRecord>,
}

impl RunOutput {
    pub fn new(command: &'static str, config: &Path, config_text: &str, dir: &Path) -> Result<Self, CliError> {
        super::ensure_dir(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command,
            started: now(),
            config_path: config.display().to_string(),
            config_sha256: sha256_hex(config_text.as_bytes()),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), bytes)?;
        self.files.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, table: Table) -> Result<(), CliError> {
        let bytes = table.into_bytes()?;
        self.write(name, &bytes)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    pub fn finish<T: Serialize>(self, parameters: &T) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started: self.started,
            finished: now(),
            config_path: self.config_path,
            config_sha256: self.config_sha256,
            parameters: serde_json::to_value(parameters)?,
            files: self.files,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        std::fs::write(self.dir.join("manifest.json"), bytes)?;
        Ok(manifest)
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// In-memory CSV table with a fixed header, LF line endings.
pub(crate) struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self {
            writer,
            width: header.len(),
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let rec: csv::ByteRecord = fields.into_iter().collect();
        debug_assert_eq!(rec.len(), self.width);
        self.writer.write_byte_record(&rec)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        self.writer
            .into_inner()
            .map_err(|e| CliError::Io(e.to_string()))
    }
}
