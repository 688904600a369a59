//! Append-only journal files, one per project.
//!
//! Records are UTF-8 JSON, one event per line, named `<project_id>.journal`
//! under the data directory (`KV_DATA_DIR`, default `./kv-data`). Files are
//! append-only; a trailing line without its newline is treated as a torn
//! write and reported, never silently dropped.
//!
//! Writers take an exclusive OS file lock for the whole read-apply-append
//! sequence, so concurrent mutations of one project serialize; readers take
//! a shared lock.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};

use super::engine::{self, replay_journal};
use super::event::JournalEvent;
use super::state::{ProjectId, ProjectState};
use super::LifecycleError;

/// Environment variable naming the data directory.
pub const DATA_DIR_ENV: &str = "KV_DATA_DIR";

/// Default data directory when `KV_DATA_DIR` is unset.
pub const DEFAULT_DATA_DIR: &str = "./kv-data";

/// How a second writer behaves when the journal is already locked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LockMode {
    /// Block until the current holder releases the lock.
    #[default]
    Wait,
    /// Fail fast with [`JournalError::Locked`].
    Fail,
}

/// Errors from journal storage.
#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt journal {path} at line {line}: {reason}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("project '{0}' already exists")]
    AlreadyExists(ProjectId),
    #[error("no journal found for project '{0}'")]
    NotFound(ProjectId),
    #[error("journal for project '{0}' is locked by another writer")]
    Locked(ProjectId),
    /// Stored journal content failed to replay (the file is bad evidence).
    #[error("journal replay failed: {0}")]
    Replay(#[source] LifecycleError),
    /// The requested operation was refused by the engine (the journal is fine).
    #[error(transparent)]
    Rejected(LifecycleError),
}

/// A directory of project journals.
#[derive(Debug, Clone)]
pub struct JournalStore {
    dir: PathBuf,
}

impl JournalStore {
    /// Opens (creating if necessary) the given data directory.
    pub fn open(dir: impl Into<PathBuf>) -> Result<JournalStore, JournalError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| JournalError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(JournalStore { dir })
    }

    /// Opens the directory named by `KV_DATA_DIR`, defaulting to `./kv-data`.
    pub fn from_env() -> Result<JournalStore, JournalError> {
        let dir = std::env::var_os(DATA_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR));
        JournalStore::open(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn journal_path(&self, id: &ProjectId) -> PathBuf {
        self.dir.join(format!("{}.journal", id.as_str()))
    }

    pub fn exists(&self, id: &ProjectId) -> bool {
        self.journal_path(id).is_file()
    }

    /// Project ids present in the data directory, sorted.
    pub fn list_projects(&self) -> Result<Vec<ProjectId>, JournalError> {
        let mut ids = Vec::new();
        let entries = std::fs::read_dir(&self.dir).map_err(|source| JournalError::Io {
            path: self.dir.clone(),
            source,
        })?;
        for entry in entries {
            let entry = entry.map_err(|source| JournalError::Io {
                path: self.dir.clone(),
                source,
            })?;
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) == Some("journal") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    if let Ok(id) = ProjectId::new(stem) {
                        ids.push(id);
                    }
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    /// Creates a project, writing its journal with the creation event.
    pub fn create_project(
        &self,
        name: &str,
        at: DateTime<Utc>,
    ) -> Result<ProjectState, JournalError> {
        let (state, event) = engine::create_project(name, at).map_err(JournalError::Rejected)?;
        let path = self.journal_path(&state.project_id);
        let mut file = match OpenOptions::new().create_new(true).write(true).open(&path) {
            Ok(file) => file,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                return Err(JournalError::AlreadyExists(state.project_id));
            }
            Err(source) => return Err(JournalError::Io { path, source }),
        };
        write_event(&mut file, &path, &event)?;
        Ok(state)
    }

    /// Reads and replays a journal under a shared lock.
    pub fn load(
        &self,
        id: &ProjectId,
        lock: LockMode,
    ) -> Result<(ProjectState, Vec<JournalEvent>), JournalError> {
        let path = self.journal_path(id);
        let file = self.open_existing(id, &path)?;
        acquire_lock(&file, &path, id, lock, false)?;
        let events = read_events(&file, &path)?;
        let state = replay_journal(&events).map_err(JournalError::Replay)?;
        Ok((state, events))
    }

    /// Applies one mutating operation under an exclusive lock held across
    /// the whole read-apply-append sequence, and returns the new state with
    /// the appended event.
    pub fn mutate<F>(
        &self,
        id: &ProjectId,
        lock: LockMode,
        op: F,
    ) -> Result<(ProjectState, JournalEvent), JournalError>
    where
        F: FnOnce(&ProjectState) -> Result<(ProjectState, JournalEvent), LifecycleError>,
    {
        let path = self.journal_path(id);
        let mut file = match OpenOptions::new().read(true).append(true).open(&path) {
            Ok(file) => file,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(JournalError::NotFound(id.clone()));
            }
            Err(source) => return Err(JournalError::Io { path, source }),
        };
        acquire_lock(&file, &path, id, lock, true)?;
        let events = read_events(&file, &path)?;
        let state = replay_journal(&events).map_err(JournalError::Replay)?;
        let (next, event) = op(&state).map_err(JournalError::Rejected)?;
        write_event(&mut file, &path, &event)?;
        Ok((next, event))
    }

    fn open_existing(&self, id: &ProjectId, path: &Path) -> Result<File, JournalError> {
        match File::open(path) {
            Ok(file) => Ok(file),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(JournalError::NotFound(id.clone()))
            }
            Err(source) => Err(JournalError::Io {
                path: path.to_path_buf(),
                source,
            }),
        }
    }
}

fn acquire_lock(
    file: &File,
    path: &Path,
    id: &ProjectId,
    mode: LockMode,
    exclusive: bool,
) -> Result<(), JournalError> {
    match mode {
        LockMode::Wait => {
            let result = if exclusive {
                file.lock()
            } else {
                file.lock_shared()
            };
            result.map_err(|source| JournalError::Io {
                path: path.to_path_buf(),
                source,
            })
        }
        LockMode::Fail => {
            let result = if exclusive {
                file.try_lock()
            } else {
                file.try_lock_shared()
            };
            match result {
                Ok(()) => Ok(()),
                Err(std::fs::TryLockError::WouldBlock) => Err(JournalError::Locked(id.clone())),
                Err(std::fs::TryLockError::Error(source)) => Err(JournalError::Io {
                    path: path.to_path_buf(),
                    source,
                }),
            }
        }
    }
}

fn write_event(file: &mut File, path: &Path, event: &JournalEvent) -> Result<(), JournalError> {
    let mut line = serde_json::to_string(event).expect("journal events serialize infallibly");
    line.push('\n');
    file.write_all(line.as_bytes())
        .and_then(|()| file.flush())
        .map_err(|source| JournalError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn read_events(mut file: &File, path: &Path) -> Result<Vec<JournalEvent>, JournalError> {
    let mut raw = Vec::new();
    file.read_to_end(&mut raw).map_err(|source| JournalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_journal_bytes(&raw, path)
}

/// Parses journal bytes: UTF-8, one JSON event per newline-terminated line.
pub fn parse_journal_bytes(raw: &[u8], path: &Path) -> Result<Vec<JournalEvent>, JournalError> {
    let text = std::str::from_utf8(raw).map_err(|e| JournalError::Corrupt {
        path: path.to_path_buf(),
        line: raw[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        reason: "invalid UTF-8".to_string(),
    })?;
    let mut events = Vec::new();
    let mut rest = text;
    let mut line_no = 0usize;
    while !rest.is_empty() {
        line_no += 1;
        let (line, complete) = match rest.find('\n') {
            Some(idx) => {
                let (line, tail) = rest.split_at(idx);
                rest = &tail[1..];
                (line, true)
            }
            None => {
                let line = rest;
                rest = "";
                (line, false)
            }
        };
        if !complete {
            // Torn final write: report it rather than quietly dropping data.
            return Err(JournalError::Corrupt {
                path: path.to_path_buf(),
                line: line_no,
                reason: "partial trailing line (missing newline)".to_string(),
            });
        }
        if line.is_empty() {
            return Err(JournalError::Corrupt {
                path: path.to_path_buf(),
                line: line_no,
                reason: "empty record line".to_string(),
            });
        }
        let event: JournalEvent =
            serde_json::from_str(line).map_err(|e| JournalError::Corrupt {
                path: path.to_path_buf(),
                line: line_no,
                reason: e.to_string(),
            })?;
        events.push(event);
    }
    Ok(events)
}
