//! Append-only JSON-lines log, one file per session.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{ContractRequest, CreateRequest};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "entry", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LogEntry {
    Create { at: u64, id: String, request: CreateRequest },
    Contract { at: u64, request: ContractRequest },
    Undo { at: u64 },
}

/// `None` keeps everything in memory.
#[derive(Clone, Debug)]
pub struct Store {
    dir: Option<PathBuf>,
}

impl Store {
    pub fn memory() -> Store {
        Store { dir: None }
    }

    pub fn open(dir: &Path) -> io::Result<Store> {
        fs::create_dir_all(dir)?;
        Ok(Store { dir: Some(dir.to_path_buf()) })
    }

    fn path(dir: &Path, id: &str) -> PathBuf {
        dir.join(format!("{id}.jsonl"))
    }

    pub fn exists(&self, id: &str) -> bool {
        self.dir.as_ref().is_some_and(|d| Store::path(d, id).exists())
    }

    /// Appends one entry and syncs it to disk before returning.
    pub fn append(&self, id: &str, entry: &LogEntry) -> io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let mut line = serde_json::to_string(entry).map_err(io::Error::other)?;
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(Store::path(dir, id))?;
        f.write_all(line.as_bytes())?;
        f.sync_data()
    }

    /// All logs in the directory, sorted by session id. A truncated final
    /// line (crash mid-write) is dropped.
    pub fn load_all(&self) -> io::Result<Vec<(String, Vec<LogEntry>)>> {
        let Some(dir) = &self.dir else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for ent in fs::read_dir(dir)? {
            let path = ent?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("jsonl") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else { continue };
            let lines: Vec<String> = BufReader::new(File::open(&path)?).lines().collect::<Result<_, _>>()?;
            let mut entries = Vec::new();
            for (i, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str(line) {
                    Ok(e) => entries.push(e),
                    Err(_) if i + 1 == lines.len() => {
                        tracing::warn!(session = %id, "dropping truncated log line");
                    }
                    Err(e) => return Err(io::Error::new(io::ErrorKind::InvalidData, format!("{id}: line {}: {e}", i + 1))),
                }
            }
            out.push((id, entries));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}
