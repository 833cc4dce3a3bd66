//! Game sessions shared between connections.
//!
//! A [`Service`] owns every live session. Each client talks to it through a
//! [`Connection`], which turns [`ClientMessage`]s into engine operations and
//! pushes [`ServerMessage`]s to the subscribers of its session. Transports
//! (TCP lines, WebSocket, or direct calls in tests) only move messages in and
//! out of a connection.
//!
//! Messages for one session are serialized by that session's lock, and
//! computer moves are searched while holding it, so a long search only
//! delays its own session.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{mpsc, Arc, Mutex, MutexGuard};
use std::thread;
use std::time::Duration;

use kalah_core::{GameHistory, Rules, SearchParams, Searcher, Seat, DEFAULT_COEFFICIENT};
use rand::Rng;

use crate::protocol::{ClientMessage, ErrorCode, Mode, ServerMessage, StateMessage, WireConfig};

pub type ConnId = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceSettings {
    /// Search depth per difficulty level.
    pub coefficient: u32,
    /// How long a networked game waits for a dropped player to rejoin before
    /// awarding the game to the opponent.
    pub disconnect_grace: Duration,
    /// Level used for hints in sessions created without one.
    pub default_hint_level: u8,
}

impl Default for ServiceSettings {
    fn default() -> Self {
        ServiceSettings {
            coefficient: DEFAULT_COEFFICIENT,
            disconnect_grace: Duration::from_secs(30),
            default_hint_level: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Waiting,
    Active,
    /// A networked player dropped and the grace period is running.
    Suspended,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Occupant {
    Open,
    Human(Option<ConnId>),
    Computer,
}

type Failure = (ErrorCode, String);

struct Session {
    id: String,
    mode: Mode,
    level: Option<u8>,
    coefficient: u32,
    rules: Rules,
    history: GameHistory,
    seats: [Occupant; 2],
    status: Status,
    subscribers: Vec<(ConnId, mpsc::Sender<ServerMessage>)>,
    /// Bumped whenever a suspension starts or ends, so stale forfeit timers
    /// can tell they no longer apply.
    suspension: u64,
}

impl Session {
    fn broadcast(&mut self, msg: ServerMessage) {
        self.subscribers.retain(|(_, tx)| tx.send(msg.clone()).is_ok());
    }

    fn occupant(&self, seat: Seat) -> Occupant {
        self.seats[seat.index()]
    }

    fn refresh_status(&mut self) {
        if self.history.current().is_terminal() {
            self.status = Status::Finished;
        } else if self.status == Status::Finished {
            self.status = Status::Active;
        }
    }

    fn ensure_turn(&self, seat: Option<Seat>) -> Result<Seat, Failure> {
        match self.status {
            Status::Active => {}
            Status::Waiting => return Err((ErrorCode::NotActive, "waiting for an opponent to join".into())),
            Status::Suspended => return Err((ErrorCode::NotActive, "game suspended: a player disconnected".into())),
            Status::Finished => return Err((ErrorCode::NotActive, "game is over".into())),
        }
        let to_move = self.history.current().to_move();
        match seat {
            Some(seat) if seat == to_move => Ok(seat),
            Some(seat) => Err((ErrorCode::OutOfTurn, format!("{seat} cannot move: {to_move} to move"))),
            None => Err((ErrorCode::OutOfTurn, format!("spectators cannot move: {to_move} to move"))),
        }
    }

    fn play(&mut self, pit: usize) -> Result<(), Failure> {
        let outcome = self
            .history
            .play(pit, &self.rules)
            .map_err(|e| (ErrorCode::IllegalMove, e.to_string()))?;
        self.refresh_status();
        self.broadcast(ServerMessage::State(StateMessage::after_move(pit, &outcome)));
        Ok(())
    }

    /// Plays computer moves, one event each, until a human is to move or the
    /// game ends. Extra turns simply keep the loop on the same seat.
    fn run_computer(&mut self) {
        if !self.seats.contains(&Occupant::Computer) {
            return;
        }
        let level = self.level.expect("sessions with a computer seat have a level");
        let params = SearchParams::for_level(level, self.coefficient).expect("validated at creation");
        let searcher = Searcher::new(self.rules);
        while self.status == Status::Active {
            let state = self.history.current();
            if self.occupant(state.to_move()) != Occupant::Computer {
                break;
            }
            let pit = searcher.search(state, &params).best_pit.expect("non-terminal position has a move");
            self.play(pit).expect("search returns legal moves");
        }
    }

    fn current_state_message(&self) -> StateMessage {
        let entries = self.history.entries();
        let cursor = self.history.cursor();
        match entries[cursor].played {
            Some(pit) if cursor > 0 => {
                let outcome = entries[cursor - 1]
                    .state
                    .apply_move_with(pit, &self.rules)
                    .expect("history holds legal moves");
                StateMessage::after_move(pit, &outcome)
            }
            _ => StateMessage::still(self.history.current()),
        }
    }

    fn human_seat(&self) -> Option<Seat> {
        Seat::ALL.into_iter().find(|&s| matches!(self.occupant(s), Occupant::Human(_)))
    }

    fn check_rewind_allowed(&self) -> Result<Seat, Failure> {
        match self.mode {
            Mode::Hvc => {}
            Mode::HvhNet => return Err((ErrorCode::Forbidden, "undo/redo is not available in networked games".into())),
            Mode::Cvc => return Err((ErrorCode::Forbidden, "undo/redo is not available for computer games".into())),
        }
        if matches!(self.status, Status::Waiting | Status::Suspended) {
            return Err((ErrorCode::NotActive, "session is not active".into()));
        }
        Ok(self.human_seat().expect("hvc has a human seat"))
    }

    /// Rewinds to the human's previous decision point, skipping the
    /// computer's replies.
    fn undo(&mut self) -> Result<(), Failure> {
        let human = self.check_rewind_allowed()?;
        if !self.history.can_undo() {
            return Err((ErrorCode::Boundary, "nothing to undo".into()));
        }
        while self.history.undo().is_some() {
            if self.history.current().to_move() == human {
                break;
            }
        }
        self.refresh_status();
        let msg = self.current_state_message();
        self.broadcast(ServerMessage::State(msg));
        Ok(())
    }

    fn redo(&mut self) -> Result<(), Failure> {
        let human = self.check_rewind_allowed()?;
        if !self.history.can_redo() {
            return Err((ErrorCode::Boundary, "nothing to redo".into()));
        }
        while self.history.redo().is_some() {
            if self.history.current().to_move() == human {
                break;
            }
        }
        self.refresh_status();
        let msg = self.current_state_message();
        self.broadcast(ServerMessage::State(msg));
        Ok(())
    }
}

struct Inner {
    settings: ServiceSettings,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    next_conn: AtomicU64,
}

/// Registry of sessions. Cheap to clone; clones share state.
#[derive(Clone)]
pub struct Service {
    inner: Arc<Inner>,
}

impl Default for Service {
    fn default() -> Self {
        Service::new(ServiceSettings::default())
    }
}

fn lock(session: &Mutex<Session>) -> MutexGuard<'_, Session> {
    session.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl Service {
    pub fn new(settings: ServiceSettings) -> Service {
        Service {
            inner: Arc::new(Inner {
                settings,
                sessions: Mutex::new(HashMap::new()),
                next_conn: AtomicU64::new(1),
            }),
        }
    }

    pub fn settings(&self) -> &ServiceSettings {
        &self.inner.settings
    }

    /// Opens a client endpoint. Everything the client should see arrives on
    /// the returned receiver, in order.
    pub fn connect(&self) -> (Connection, mpsc::Receiver<ServerMessage>) {
        let (tx, rx) = mpsc::channel();
        let id = self.inner.next_conn.fetch_add(1, Ordering::Relaxed);
        (Connection { service: self.clone(), id, outbox: tx, binding: None }, rx)
    }

    pub fn session_count(&self) -> usize {
        self.sessions().len()
    }

    pub fn session_status(&self, session_id: &str) -> Option<Status> {
        self.find(session_id).map(|s| lock(&s).status)
    }

    /// Current board text of a session.
    pub fn session_board(&self, session_id: &str) -> Option<String> {
        self.find(session_id).map(|s| lock(&s).history.current().to_string())
    }

    fn sessions(&self) -> MutexGuard<'_, HashMap<String, Arc<Mutex<Session>>>> {
        self.inner.sessions.lock().unwrap_or_else(|p| p.into_inner())
    }

    fn find(&self, session_id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions().get(session_id).cloned()
    }

    fn remove(&self, session_id: &str) {
        self.sessions().remove(session_id);
    }

    fn insert(&self, mut session: Session) -> Arc<Mutex<Session>> {
        let mut sessions = self.sessions();
        let mut rng = rand::rng();
        let id = loop {
            let candidate = format!("{:016x}", rng.random::<u64>());
            if !sessions.contains_key(&candidate) {
                break candidate;
            }
        };
        session.id = id.clone();
        let session = Arc::new(Mutex::new(session));
        sessions.insert(id, session.clone());
        session
    }

    fn schedule_forfeit(&self, session_id: String, suspension: u64) {
        let service = self.clone();
        let grace = self.inner.settings.disconnect_grace;
        thread::spawn(move || {
            thread::sleep(grace);
            let Some(session) = service.find(&session_id) else { return };
            let mut s = lock(&session);
            if s.status != Status::Suspended || s.suspension != suspension {
                return;
            }
            let Some(dropped) = Seat::ALL.into_iter().find(|&seat| s.occupant(seat) == Occupant::Human(None))
            else {
                return;
            };
            s.status = Status::Finished;
            s.broadcast(ServerMessage::error(
                ErrorCode::Forfeit,
                format!("{dropped} did not return and forfeits; {} wins", dropped.opposite()),
            ));
        });
    }
}

struct Binding {
    session: Arc<Mutex<Session>>,
    session_id: String,
    seat: Option<Seat>,
}

/// One client's view of the service.
pub struct Connection {
    service: Service,
    id: ConnId,
    outbox: mpsc::Sender<ServerMessage>,
    binding: Option<Binding>,
}

impl Connection {
    pub fn id(&self) -> ConnId {
        self.id
    }

    pub fn session_id(&self) -> Option<&str> {
        self.binding.as_ref().map(|b| b.session_id.as_str())
    }

    pub fn seat(&self) -> Option<Seat> {
        self.binding.as_ref().and_then(|b| b.seat)
    }

    /// Parses one JSON message and handles it; malformed input is answered
    /// with a `bad_request` error.
    pub fn handle_text(&mut self, text: &str) {
        match serde_json::from_str::<ClientMessage>(text) {
            Ok(msg) => self.handle(msg),
            Err(e) => self.reply(ServerMessage::error(ErrorCode::BadRequest, e.to_string())),
        }
    }

    pub fn handle(&mut self, msg: ClientMessage) {
        let result = match msg {
            ClientMessage::Create { mode, level, config } => self.create(mode, level, config),
            ClientMessage::Join { session_id } => self.join(&session_id),
            ClientMessage::Move { pit } => self.submit_move(pit),
            ClientMessage::Hint { level } => self.hint(level),
            ClientMessage::Undo => self.with_session(|s, _| s.undo()),
            ClientMessage::Redo => self.with_session(|s, _| s.redo()),
        };
        if let Err((code, message)) = result {
            self.reply(ServerMessage::Error { code, message });
        }
    }

    fn reply(&self, msg: ServerMessage) {
        let _ = self.outbox.send(msg);
    }

    fn with_session<T>(
        &self,
        f: impl FnOnce(&mut Session, Option<Seat>) -> Result<T, Failure>,
    ) -> Result<T, Failure> {
        let binding = self
            .binding
            .as_ref()
            .ok_or((ErrorCode::NotInSession, "create or join a session first".to_string()))?;
        let mut session = lock(&binding.session);
        f(&mut session, binding.seat)
    }

    fn create(&mut self, mode: Mode, level: Option<u8>, config: Option<WireConfig>) -> Result<(), Failure> {
        if self.binding.is_some() {
            return Err((ErrorCode::BadRequest, "connection already belongs to a session".into()));
        }
        let settings = self.service.settings();
        let config = config.unwrap_or_default().to_config();
        let initial = config.initial_board().map_err(|e| (ErrorCode::InvalidConfig, e.to_string()))?;
        let needs_level = mode != Mode::HvhNet;
        if needs_level && level.is_none() {
            return Err((ErrorCode::InvalidLevel, "a level (1-4) is required when the computer plays".into()));
        }
        if let Some(level) = level {
            SearchParams::for_level(level, settings.coefficient)
                .map_err(|e| (ErrorCode::InvalidLevel, e.to_string()))?;
        }

        let (seats, status, my_seat) = match mode {
            Mode::HvhNet => ([Occupant::Human(Some(self.id)), Occupant::Open], Status::Waiting, Some(Seat::South)),
            Mode::Hvc => ([Occupant::Human(Some(self.id)), Occupant::Computer], Status::Active, Some(Seat::South)),
            Mode::Cvc => ([Occupant::Computer, Occupant::Computer], Status::Active, None),
        };
        let session = self.service.insert(Session {
            id: String::new(),
            mode,
            level,
            coefficient: settings.coefficient,
            rules: config.rules(),
            history: GameHistory::new(initial),
            seats,
            status,
            subscribers: vec![(self.id, self.outbox.clone())],
            suspension: 0,
        });

        let mut s = lock(&session);
        let session_id = s.id.clone();
        self.reply(ServerMessage::Created { session_id: session_id.clone(), seat: my_seat.map(Into::into) });
        if s.status == Status::Active {
            let msg = StateMessage::still(s.history.current());
            s.broadcast(ServerMessage::State(msg));
            s.run_computer();
        }
        drop(s);
        self.binding = Some(Binding { session, session_id, seat: my_seat });
        Ok(())
    }

    fn join(&mut self, session_id: &str) -> Result<(), Failure> {
        if self.binding.is_some() {
            return Err((ErrorCode::BadRequest, "connection already belongs to a session".into()));
        }
        let session = self
            .service
            .find(session_id)
            .ok_or_else(|| (ErrorCode::NotFound, format!("no session {session_id:?}")))?;
        let mut s = lock(&session);
        if s.mode != Mode::HvhNet {
            return Err((ErrorCode::SessionFull, "only networked two-player sessions can be joined".into()));
        }
        let seat = match s.status {
            Status::Waiting => Seat::North,
            Status::Suspended => Seat::ALL
                .into_iter()
                .find(|&seat| s.occupant(seat) == Occupant::Human(None))
                .expect("a suspended session has a vacated seat"),
            Status::Active | Status::Finished => {
                return Err((ErrorCode::SessionFull, "session already has two players".into()))
            }
        };
        s.seats[seat.index()] = Occupant::Human(Some(self.id));
        if s.status == Status::Suspended {
            s.suspension += 1;
        }
        s.status = Status::Active;
        s.refresh_status();
        s.subscribers.push((self.id, self.outbox.clone()));
        self.reply(ServerMessage::Joined { seat: seat.into() });
        let msg = s.current_state_message();
        s.broadcast(ServerMessage::State(msg));
        drop(s);
        self.binding = Some(Binding { session, session_id: session_id.to_string(), seat: Some(seat) });
        Ok(())
    }

    fn submit_move(&mut self, pit: usize) -> Result<(), Failure> {
        self.with_session(|s, seat| {
            s.ensure_turn(seat)?;
            s.play(pit)?;
            s.run_computer();
            Ok(())
        })
    }

    fn hint(&mut self, level: Option<u8>) -> Result<(), Failure> {
        let default_level = self.service.settings().default_hint_level;
        let result = self.with_session(|s, seat| {
            s.ensure_turn(seat)?;
            let state = s.history.current();
            if state.is_terminal() {
                return Err((ErrorCode::NoHint, "no hint available: game is over".into()));
            }
            let level = level.or(s.level).unwrap_or(default_level);
            let params = SearchParams::for_level(level, s.coefficient)
                .map_err(|e| (ErrorCode::InvalidLevel, e.to_string()))?;
            Ok(Searcher::new(s.rules).search(state, &params))
        })?;
        self.reply(ServerMessage::HintResult {
            pit: result.best_pit,
            value: result.value,
            nodes: result.nodes_generated(),
        });
        Ok(())
    }

    fn leave(&mut self) {
        let Some(binding) = self.binding.take() else { return };
        let mut s = lock(&binding.session);
        s.subscribers.retain(|(id, _)| *id != self.id);
        let mut remove = s.subscribers.is_empty();
        if s.mode == Mode::HvhNet {
            if let Some(seat) = binding.seat {
                s.seats[seat.index()] = Occupant::Human(None);
                match s.status {
                    Status::Waiting => remove = true,
                    Status::Active => {
                        s.status = Status::Suspended;
                        s.suspension += 1;
                        let suspension = s.suspension;
                        s.broadcast(ServerMessage::error(
                            ErrorCode::OpponentDisconnected,
                            format!("{seat} disconnected; waiting for them to rejoin"),
                        ));
                        self.service.schedule_forfeit(binding.session_id.clone(), suspension);
                        remove = false;
                    }
                    Status::Suspended => {
                        // Both players are gone.
                        remove = true;
                    }
                    Status::Finished => {}
                }
            }
        }
        drop(s);
        if remove {
            self.service.remove(&binding.session_id);
        }
    }
}

impl Drop for Connection {
    fn drop(&mut self) {
        self.leave();
    }
}
