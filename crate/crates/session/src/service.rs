use std::collections::HashMap;
use std::io;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::ApiError;
use crate::model::{ContractRequest, ContractResponse, CreateRequest, ExportBundle, Session, SessionSummary, WinnowView};
use crate::store::{LogEntry, Store};

/// One session: writers take `write` for the whole mutation, readers only
/// clone the current snapshot.
struct Slot {
    write: Mutex<()>,
    snapshot: RwLock<Arc<Session>>,
}

impl Slot {
    fn new(s: Session) -> Slot {
        Slot { write: Mutex::new(()), snapshot: RwLock::new(Arc::new(s)) }
    }

    fn get(&self) -> Arc<Session> {
        self.snapshot.read().expect("snapshot lock").clone()
    }
}

pub struct Service {
    store: Store,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 128 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

fn io_err(e: io::Error) -> ApiError {
    ApiError::internal(format!("log write failed: {e}"))
}

impl Service {
    pub fn in_memory() -> Service {
        Service { store: Store::memory(), sessions: RwLock::new(HashMap::new()) }
    }

    /// Opens `dir` and rebuilds every session by replaying its log.
    pub fn open(dir: &Path) -> io::Result<Service> {
        let store = Store::open(dir)?;
        let mut sessions = HashMap::new();
        for (id, entries) in store.load_all()? {
            match replay(&entries) {
                Ok(s) => {
                    sessions.insert(id, Arc::new(Slot::new(s)));
                }
                Err(e) => tracing::warn!(session = %id, error = %e, "skipping session that fails to replay"),
            }
        }
        tracing::info!(count = sessions.len(), dir = %dir.display(), "sessions restored");
        Ok(Service { store, sessions: RwLock::new(sessions) })
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        self.sessions.read().expect("session map").get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("session map").keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn create(&self, req: CreateRequest) -> Result<SessionSummary, ApiError> {
        let id = match &req.id {
            Some(id) if !valid_id(id) => {
                return Err(ApiError::bad_request("BAD_ID", "session ids use letters, digits, '-' and '_'"))
            }
            Some(id) => id.clone(),
            None => uuid::Uuid::new_v4().to_string(),
        };
        let at = now_ms();
        let session = Session::create(id.clone(), &req, at)?;
        let mut map = self.sessions.write().expect("session map");
        if map.contains_key(&id) || self.store.exists(&id) {
            return Err(ApiError::conflict("SESSION_EXISTS", format!("session {id:?} already exists")));
        }
        self.store.append(&id, &LogEntry::Create { at, id: id.clone(), request: req }).map_err(io_err)?;
        let summary = session.summary();
        map.insert(id, Arc::new(Slot::new(session)));
        Ok(summary)
    }

    pub fn get(&self, id: &str) -> Result<SessionSummary, ApiError> {
        Ok(self.slot(id)?.get().summary())
    }

    pub fn snapshot(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        Ok(self.slot(id)?.get())
    }

    pub fn contract(&self, id: &str, req: ContractRequest) -> Result<ContractResponse, ApiError> {
        let slot = self.slot(id)?;
        let _w = slot.write.lock().expect("writer lock");
        let at = now_ms();
        let mut next = (*slot.get()).clone();
        let resp = next.contract(&req, at)?;
        self.store.append(id, &LogEntry::Contract { at, request: req }).map_err(io_err)?;
        *slot.snapshot.write().expect("snapshot lock") = Arc::new(next);
        Ok(resp)
    }

    pub fn undo(&self, id: &str) -> Result<SessionSummary, ApiError> {
        let slot = self.slot(id)?;
        let _w = slot.write.lock().expect("writer lock");
        let at = now_ms();
        let mut next = (*slot.get()).clone();
        next.undo(at)?;
        self.store.append(id, &LogEntry::Undo { at }).map_err(io_err)?;
        let summary = next.summary();
        *slot.snapshot.write().expect("snapshot lock") = Arc::new(next);
        Ok(summary)
    }

    pub fn winnow(&self, id: &str) -> Result<WinnowView, ApiError> {
        Ok(self.slot(id)?.get().winnow_view())
    }

    pub fn export(&self, id: &str) -> Result<ExportBundle, ApiError> {
        Ok(self.slot(id)?.get().export())
    }
}

/// Rebuilds a session from its log entries.
pub fn replay(entries: &[LogEntry]) -> Result<Session, ApiError> {
    let mut it = entries.iter();
    let mut s = match it.next() {
        Some(LogEntry::Create { at, id, request }) => Session::create(id.clone(), request, *at)?,
        _ => return Err(ApiError::internal("log does not start with a create entry")),
    };
    for e in it {
        match e {
            LogEntry::Contract { at, request } => {
                s.contract(request, *at)?;
            }
            LogEntry::Undo { at } => s.undo(*at)?,
            LogEntry::Create { .. } => return Err(ApiError::internal("second create entry in log")),
        }
    }
    Ok(s)
}
