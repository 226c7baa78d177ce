//! Append-only JSON-lines event logs, one file per session.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crs_core::dialog::Event;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path} line {line}: {source}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        source: serde_json::Error,
    },
    #[error("invalid session id `{0}`")]
    BadId(String),
}

#[derive(Debug, Clone)]
pub struct EventStore {
    dir: PathBuf,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 128 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

impl EventStore {
    /// Logs live in `data_dir/sessions`.
    pub fn open(data_dir: &Path) -> Result<Self, StoreError> {
        let dir = data_dir.join("sessions");
        fs::create_dir_all(&dir).map_err(|source| StoreError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, id: &str) -> Result<PathBuf, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::BadId(id.to_string()));
        }
        Ok(self.dir.join(format!("{id}.jsonl")))
    }

    /// Append events; `sync` forces them to stable storage.
    pub fn append(&self, id: &str, events: &[Event], sync: bool) -> Result<(), StoreError> {
        let path = self.path(id)?;
        let io = |source| StoreError::Io {
            path: path.clone(),
            source,
        };
        let mut buf = Vec::new();
        for e in events {
            serde_json::to_writer(&mut buf, e).expect("events serialize");
            buf.push(b'\n');
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        file.write_all(&buf).map_err(io)?;
        file.flush().map_err(io)?;
        if sync {
            file.sync_all().map_err(io)?;
        }
        Ok(())
    }

    /// Read a log. A torn final line (no trailing newline) is dropped.
    pub fn load(&self, id: &str) -> Result<Vec<Event>, StoreError> {
        let path = self.path(id)?;
        read_log(&path)
    }

    /// Session ids with a log on disk, sorted.
    pub fn ids(&self) -> Result<Vec<String>, StoreError> {
        let io = |source| StoreError::Io {
            path: self.dir.clone(),
            source,
        };
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.dir).map_err(io)? {
            let name = entry.map_err(io)?.file_name();
            if let Some(id) = name.to_str().and_then(|n| n.strip_suffix(".jsonl")) {
                if valid_id(id) {
                    ids.push(id.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    fn scenario_path(&self, id: &str) -> Result<PathBuf, StoreError> {
        self.path(id).map(|p| p.with_extension("scenario"))
    }

    /// Record the scenario label a session was created with.
    pub fn save_scenario(&self, id: &str, tag: &str) -> Result<(), StoreError> {
        let path = self.scenario_path(id)?;
        fs::write(&path, tag).map_err(|source| StoreError::Io { path, source })
    }

    pub fn load_scenario(&self, id: &str) -> Result<Option<String>, StoreError> {
        let path = self.scenario_path(id)?;
        match fs::read_to_string(&path) {
            Ok(tag) => Ok(Some(tag.trim().to_string())),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(StoreError::Io { path, source }),
        }
    }

    /// Delete a session's log and label; missing files are fine.
    pub fn remove(&self, id: &str) -> Result<(), StoreError> {
        for path in [self.path(id)?, self.scenario_path(id)?] {
            match fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(StoreError::Io { path, source }),
            }
        }
        Ok(())
    }
}

pub fn read_log(path: &Path) -> Result<Vec<Event>, StoreError> {
    let io = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = BufReader::new(File::open(path).map_err(io)?);
    let mut events = Vec::new();
    let mut line = String::new();
    let mut n = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line).map_err(io)? == 0 {
            break;
        }
        n += 1;
        let complete = line.ends_with('\n');
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line.trim_end()) {
            Ok(e) => events.push(e),
            Err(_) if !complete => break,
            Err(source) => {
                return Err(StoreError::Corrupt {
                    path: path.to_path_buf(),
                    line: n,
                    source,
                })
            }
        }
    }
    Ok(events)
}
