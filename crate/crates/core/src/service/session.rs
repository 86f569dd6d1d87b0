use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Game, Row, TriSystem, Word};
use crate::search::{explore, PairConfig, SearchBounds, SearchOutcome, TriConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("index out of range: {index} is not in [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("move limit of {0} reached")]
    MoveLimit(usize),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
}

impl SessionError {
    pub fn kind(&self) -> &'static str {
        match self {
            SessionError::UnknownSession(_) => "unknown_session",
            SessionError::IndexOutOfRange { .. } => "index_out_of_range",
            SessionError::NothingToUndo => "nothing_to_undo",
            SessionError::MoveLimit(_) => "move_limit",
            SessionError::InvalidSystem(_) => "invalid_system",
        }
    }
}

/// What a player sees after each move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub played: Vec<usize>,
    pub top: Word,
    pub middle: Word,
    pub bottom: Word,
    /// Length of the longest prefix shared by all three rows.
    pub common_prefix_len: usize,
    pub won_games: Vec<Game>,
    /// Games whose rows are no longer prefix-comparable; they can never be
    /// won from here.
    pub dead_games: Vec<Game>,
}

/// A domino list under construction.
#[derive(Debug, Clone)]
pub struct Session {
    system: TriSystem,
    played: Vec<usize>,
    rows: [Vec<u8>; 3],
}

impl Session {
    pub fn new(system: TriSystem) -> Result<Self, SessionError> {
        system.validate().map_err(|v| {
            SessionError::InvalidSystem(
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok(Session {
            system,
            played: Vec::new(),
            rows: Default::default(),
        })
    }

    pub fn system(&self) -> &TriSystem {
        &self.system
    }

    pub fn played(&self) -> &[usize] {
        &self.played
    }

    pub fn play(&mut self, index: usize) -> Result<SessionView, SessionError> {
        let n = self.system.len();
        let domino = self
            .system
            .domino(index)
            .map_err(|_| SessionError::IndexOutOfRange { index, n })?;
        for (row, track) in Row::ALL.iter().zip(self.rows.iter_mut()) {
            track.extend_from_slice(domino.row(*row).as_bytes());
        }
        self.played.push(index);
        Ok(self.view())
    }

    pub fn undo(&mut self) -> Result<SessionView, SessionError> {
        let index = self.played.pop().ok_or(SessionError::NothingToUndo)?;
        let domino = self
            .system
            .domino(index)
            .expect("played indices are in range");
        for (row, track) in Row::ALL.iter().zip(self.rows.iter_mut()) {
            let len = track.len() - domino.row(*row).len();
            track.truncate(len);
        }
        Ok(self.view())
    }

    pub fn view(&self) -> SessionView {
        let [top, middle, bottom] = &self.rows;
        let common_prefix_len = top
            .iter()
            .zip(middle.iter())
            .zip(bottom.iter())
            .take_while(|((a, b), c)| a == b && b == c)
            .count();
        let row = |r: Row| &self.rows[r as usize];
        let comparable = |a: &[u8], b: &[u8]| a.starts_with(b) || b.starts_with(a);

        let mut won_games = Vec::new();
        let mut dead_games = Vec::new();
        let pair_state = |g: Game| {
            let (a, b) = g.pair_rows().expect("pair game");
            (row(a) == row(b), !comparable(row(a), row(b)))
        };
        let nonempty = !self.played.is_empty();
        let pairs: Vec<(Game, bool, bool)> = Game::PAIRS
            .iter()
            .map(|&g| {
                let (equal, dead) = pair_state(g);
                (g, equal, dead)
            })
            .collect();
        if nonempty && pairs.iter().all(|p| p.1) {
            won_games.push(Game::TopMiddleBottom);
        }
        if pairs.iter().any(|p| p.2) {
            dead_games.push(Game::TopMiddleBottom);
        }
        for (g, equal, dead) in pairs {
            if nonempty && equal {
                won_games.push(g);
            }
            if dead {
                dead_games.push(g);
            }
        }
        SessionView {
            played: self.played.clone(),
            top: Word::new(top.clone()),
            middle: Word::new(middle.clone()),
            bottom: Word::new(bottom.clone()),
            common_prefix_len,
            won_games,
            dead_games,
        }
    }

    /// First move of a shortest nonempty continuation that wins `game`,
    /// searched from the current rows.
    pub fn hint(&self, game: Game, bounds: &SearchBounds) -> Option<usize> {
        let outcome = match game.pair_rows() {
            None => {
                let [t, m, b] = &self.rows;
                let start = TriConfig::from_products(t, m, b)?;
                explore(&self.system, start, bounds).outcome
            }
            Some((a, b)) => {
                let start =
                    PairConfig::from_products(&self.rows[a as usize], &self.rows[b as usize])?;
                let projection = self.system.project(game).expect("pair game");
                explore(&projection, start, bounds).outcome
            }
        };
        match outcome {
            SearchOutcome::Found(m) => Some(m.indices()[0]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StoreConfig {
    pub idle_expiry: Duration,
    pub max_moves: usize,
    pub hint_bounds: SearchBounds,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            idle_expiry: Duration::from_secs(3600),
            max_moves: 10_000,
            hint_bounds: SearchBounds::new(32, 32, 100_000).expect("positive"),
        }
    }
}

struct Entry {
    session: Session,
    last_used: Instant,
}

/// In-memory sessions. Requests on one session are serialized by its own
/// lock; different sessions proceed independently.
pub struct SessionStore {
    config: StoreConfig,
    sessions: Mutex<HashMap<String, Arc<Mutex<Entry>>>>,
}

impl SessionStore {
    pub fn new(config: StoreConfig) -> Self {
        SessionStore {
            config,
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    pub fn create(&self, system: TriSystem) -> Result<(String, SessionView), SessionError> {
        let session = Session::new(system)?;
        let view = session.view();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let entry = Arc::new(Mutex::new(Entry {
            session,
            last_used: Instant::now(),
        }));
        let mut map = self.sessions.lock().expect("store lock");
        self.expire(&mut map);
        map.insert(id.clone(), entry);
        Ok((id, view))
    }

    pub fn play(&self, id: &str, index: usize) -> Result<SessionView, SessionError> {
        let max = self.config.max_moves;
        self.with(id, |s| {
            if s.played().len() >= max {
                return Err(SessionError::MoveLimit(max));
            }
            s.play(index)
        })
    }

    pub fn undo(&self, id: &str) -> Result<SessionView, SessionError> {
        self.with(id, Session::undo)
    }

    pub fn view(&self, id: &str) -> Result<SessionView, SessionError> {
        self.with(id, |s| Ok(s.view()))
    }

    pub fn hint(&self, id: &str, game: Game) -> Result<Option<usize>, SessionError> {
        let bounds = self.config.hint_bounds;
        self.with(id, |s| Ok(s.hint(game, &bounds)))
    }

    pub fn system(&self, id: &str) -> Result<TriSystem, SessionError> {
        self.with(id, |s| Ok(s.system().clone()))
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn with<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, SessionError>,
    ) -> Result<T, SessionError> {
        let entry = {
            let mut map = self.sessions.lock().expect("store lock");
            self.expire(&mut map);
            map.get(id)
                .cloned()
                .ok_or_else(|| SessionError::UnknownSession(id.to_string()))?
        };
        let mut entry = entry.lock().expect("session lock");
        entry.last_used = Instant::now();
        f(&mut entry.session)
    }

    fn expire(&self, map: &mut HashMap<String, Arc<Mutex<Entry>>>) {
        let now = Instant::now();
        let expiry = self.config.idle_expiry;
        map.retain(|_, e| match e.try_lock() {
            Ok(e) => now.duration_since(e.last_used) < expiry,
            // in use right now, so not idle
            Err(_) => true,
        });
    }
}
