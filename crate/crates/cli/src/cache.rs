//! Append-only JSONL result cache, one record per run.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::report::Table;
use crate::Status;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cache {path}, line {line}: {msg}")]
    Malformed { path: String, line: usize, msg: String },
    #[error("cache {path}: no record for this command")]
    Missing { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub tool_version: String,
    pub key: Value,
    pub status: Status,
    pub text: Vec<String>,
    pub table: Table,
}

pub fn append(path: &Path, entry: &CacheEntry) -> Result<(), CacheError> {
    let io = |source| CacheError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    let mut line = serde_json::to_string(entry).expect("entries serialize");
    line.push('\n');
    f.write_all(line.as_bytes()).map_err(io)?;
    f.flush().map_err(io)
}

/// All entries, oldest first.
pub fn read_all(path: &Path) -> Result<Vec<CacheEntry>, CacheError> {
    let name = path.display().to_string();
    let f = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(source) => return Err(CacheError::Io { path: name, source }),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|source| CacheError::Io {
            path: name.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |msg: String| CacheError::Malformed {
            path: name.clone(),
            line: i + 1,
            msg,
        };
        let v: Value = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        match v.get("schema_version").and_then(Value::as_u64) {
            Some(s) if s == SCHEMA_VERSION as u64 => {}
            Some(s) => return Err(malformed(format!("unsupported schema_version {s}"))),
            None => return Err(malformed("missing schema_version".into())),
        }
        out.push(serde_json::from_value(v).map_err(|e| malformed(e.to_string()))?);
    }
    Ok(out)
}

/// The newest entry whose key equals `key`.
pub fn lookup(path: &Path, key: &Value) -> Result<CacheEntry, CacheError> {
    read_all(path)?
        .into_iter()
        .rev()
        .find(|e| &e.key == key)
        .ok_or_else(|| CacheError::Missing {
            path: path.display().to_string(),
        })
}
