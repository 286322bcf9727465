//! Durable session storage: one JSON snapshot and one append-only JSONL
//! edit log per session. An edit is acknowledged only after its log record
//! is on disk, so reopening the store replays exactly the acknowledged
//! edits.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{apply_edit, create_session, AnnotationSession, EditCommand, SessionDoc, SessionError};
use crate::annotation::{MistakeList, TokenizedText};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {reason}")]
    Corrupt { path: String, reason: String },
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("session is leased to {holder} until {expires_at}")]
    LeaseHeld { holder: String, expires_at: DateTime<Utc> },
    #[error("{0} holds no lease on this session")]
    NoLease(String),
    #[error(transparent)]
    Session(#[from] SessionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lease {
    pub holder: String,
    pub expires_at: DateTime<Utc>,
}

impl Lease {
    fn active(&self, now: DateTime<Utc>) -> bool {
        self.expires_at > now
    }
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    /// Log records up to this sequence number are already applied.
    applied_seq: u64,
    session: AnnotationSession,
}

#[derive(Serialize, Deserialize)]
struct LogRecord {
    seq: u64,
    doc_id: String,
    based_on: u64,
    at: DateTime<Utc>,
    command: EditCommand,
}

struct Slot {
    session: AnnotationSession,
    seq: u64,
    log: File,
    lease: Option<Lease>,
}

pub struct SessionStore {
    dir: PathBuf,
    sessions: RwLock<HashMap<String, Arc<Mutex<Slot>>>>,
    counter: AtomicU64,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.display().to_string(), source }
}

impl SessionStore {
    /// Opens (creating if needed) a state directory and recovers every
    /// session in it. A torn final log line, from a crash mid-write, was
    /// never acknowledged and is discarded.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let mut sessions = HashMap::new();
        let mut entries: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(io_err(&dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with(".snapshot.json"))
            .collect();
        entries.sort();
        for path in entries {
            let slot = Self::recover(&dir, &path)?;
            sessions.insert(slot.session.session_id.clone(), Arc::new(Mutex::new(slot)));
        }
        Ok(Self { dir, sessions: RwLock::new(sessions), counter: AtomicU64::new(0) })
    }

    fn snapshot_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.snapshot.json"))
    }

    fn log_path(dir: &Path, id: &str) -> PathBuf {
        dir.join(format!("{id}.log.jsonl"))
    }

    fn recover(dir: &Path, snapshot_path: &Path) -> Result<Slot, StoreError> {
        let corrupt = |path: &Path, reason: String| StoreError::Corrupt { path: path.display().to_string(), reason };
        let raw = fs::read_to_string(snapshot_path).map_err(io_err(snapshot_path))?;
        let Snapshot { applied_seq, mut session } =
            serde_json::from_str(&raw).map_err(|e| corrupt(snapshot_path, e.to_string()))?;
        let log_path = Self::log_path(dir, &session.session_id);
        let mut seq = applied_seq;
        let mut good_len = 0u64;
        if log_path.exists() {
            let file = File::open(&log_path).map_err(io_err(&log_path))?;
            let mut reader = BufReader::new(file);
            let mut line = String::new();
            loop {
                line.clear();
                let n = reader.read_line(&mut line).map_err(io_err(&log_path))?;
                if n == 0 {
                    break;
                }
                let Some(body) = line.strip_suffix('\n') else { break };
                let record: LogRecord = match serde_json::from_str(body) {
                    Ok(r) => r,
                    Err(e) => {
                        // Only the last line may be damaged.
                        let mut rest = String::new();
                        reader.read_line(&mut rest).map_err(io_err(&log_path))?;
                        if rest.is_empty() {
                            break;
                        }
                        return Err(corrupt(&log_path, e.to_string()));
                    }
                };
                good_len += n as u64;
                if record.seq <= seq {
                    continue;
                }
                apply_edit(&mut session, &record.doc_id, record.based_on, &record.command, record.at)
                    .map_err(|e| corrupt(&log_path, format!("record {}: {e}", record.seq)))?;
                seq = record.seq;
            }
        }
        let log = OpenOptions::new().create(true).append(true).open(&log_path).map_err(io_err(&log_path))?;
        log.set_len(good_len).map_err(io_err(&log_path))?;
        Ok(Slot { session, seq, log, lease: None })
    }

    fn write_snapshot(&self, id: &str, snapshot: &Snapshot) -> Result<(), StoreError> {
        let path = self.snapshot_path(id);
        let tmp = path.with_extension("json.tmp");
        let body = serde_json::to_vec_pretty(snapshot).expect("session serializes");
        let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(&body).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    fn slot(&self, id: &str) -> Result<Arc<Mutex<Slot>>, StoreError> {
        self.sessions.read().expect("store lock").get(id).cloned().ok_or_else(|| StoreError::UnknownSession(id.to_string()))
    }

    pub fn create(
        &self,
        annotator_id: &str,
        texts: Vec<TokenizedText>,
        pre: &MistakeList,
        now: DateTime<Utc>,
    ) -> Result<AnnotationSession, StoreError> {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let mut id = format!("s{}-{n}", now.timestamp_millis());
        while self.sessions.read().expect("store lock").contains_key(&id) || self.snapshot_path(&id).exists() {
            id.push('x');
        }
        let session = create_session(id.clone(), annotator_id, texts, pre, now)?;
        self.write_snapshot(&id, &Snapshot { applied_seq: 0, session: session.clone() })?;
        let log_path = Self::log_path(&self.dir, &id);
        let log = OpenOptions::new().create(true).write(true).truncate(true).open(&log_path).map_err(io_err(&log_path))?;
        let slot = Slot { session: session.clone(), seq: 0, log, lease: None };
        self.sessions.write().expect("store lock").insert(id, Arc::new(Mutex::new(slot)));
        Ok(session)
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("store lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn get(&self, id: &str) -> Result<AnnotationSession, StoreError> {
        Ok(self.slot(id)?.lock().expect("slot lock").session.clone())
    }

    pub fn lease(&self, id: &str, now: DateTime<Utc>) -> Result<Option<Lease>, StoreError> {
        Ok(self.slot(id)?.lock().expect("slot lock").lease.clone().filter(|l| l.active(now)))
    }

    /// Validates, logs durably, then applies one edit. While someone holds
    /// an active lease only they may write.
    pub fn apply(
        &self,
        id: &str,
        doc_id: &str,
        based_on: u64,
        command: &EditCommand,
        writer: Option<&str>,
        now: DateTime<Utc>,
    ) -> Result<SessionDoc, StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().expect("slot lock");
        if let Some(lease) = slot.lease.as_ref().filter(|l| l.active(now)) {
            if writer != Some(lease.holder.as_str()) {
                return Err(StoreError::LeaseHeld { holder: lease.holder.clone(), expires_at: lease.expires_at });
            }
        }
        let mut next = slot.session.clone();
        apply_edit(&mut next, doc_id, based_on, command, now)?;
        let record = LogRecord { seq: slot.seq + 1, doc_id: doc_id.to_string(), based_on, at: now, command: command.clone() };
        let mut line = serde_json::to_string(&record).expect("record serializes");
        line.push('\n');
        let log_path = Self::log_path(&self.dir, id);
        slot.log.write_all(line.as_bytes()).map_err(io_err(&log_path))?;
        slot.log.sync_data().map_err(io_err(&log_path))?;
        slot.seq = record.seq;
        slot.session = next;
        Ok(slot.session.doc(doc_id).expect("doc exists after edit").clone())
    }

    pub fn acquire_lease(&self, id: &str, holder: &str, ttl: Duration, now: DateTime<Utc>) -> Result<Lease, StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().expect("slot lock");
        if let Some(l) = slot.lease.as_ref().filter(|l| l.active(now) && l.holder != holder) {
            return Err(StoreError::LeaseHeld { holder: l.holder.clone(), expires_at: l.expires_at });
        }
        let lease = Lease { holder: holder.to_string(), expires_at: now + ttl };
        slot.lease = Some(lease.clone());
        Ok(lease)
    }

    /// Extends the caller's lease. A lapsed lease can be renewed as long as
    /// nobody else has taken it meanwhile.
    pub fn heartbeat(&self, id: &str, holder: &str, ttl: Duration, now: DateTime<Utc>) -> Result<Lease, StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().expect("slot lock");
        match slot.lease.as_mut() {
            Some(l) if l.holder == holder => {
                l.expires_at = now + ttl;
                Ok(l.clone())
            }
            _ => Err(StoreError::NoLease(holder.to_string())),
        }
    }

    pub fn release(&self, id: &str, holder: &str) -> Result<(), StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().expect("slot lock");
        match &slot.lease {
            Some(l) if l.holder == holder => {
                slot.lease = None;
                Ok(())
            }
            _ => Err(StoreError::NoLease(holder.to_string())),
        }
    }

    /// Folds the log of one session into its snapshot.
    pub fn compact(&self, id: &str) -> Result<(), StoreError> {
        let slot = self.slot(id)?;
        let slot = slot.lock().expect("slot lock");
        self.write_snapshot(id, &Snapshot { applied_seq: slot.seq, session: slot.session.clone() })?;
        let log_path = Self::log_path(&self.dir, id);
        slot.log.set_len(0).map_err(io_err(&log_path))?;
        slot.log.sync_all().map_err(io_err(&log_path))
    }

    /// Compacts every session; called on clean shutdown.
    pub fn compact_all(&self) -> Result<(), StoreError> {
        for id in self.ids() {
            self.compact(&id)?;
        }
        Ok(())
    }
}
