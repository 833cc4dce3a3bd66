//! Text front end: board rendering, prompt parsing, and the play loops for
//! local games and for games relayed through a server.
//!
//! Humans address pits as `1..=n` from left to right as seen from their own
//! side, which is the same as sowing order, so pit `k` is index `k - 1`.

use std::io::{self, BufRead, Write};

use kalah_core::{
    BoardState, GameHistory, GameResult, MoveError, MoveOutcome, Rules, SearchParams, SearchResult,
    Searcher, Seat,
};

use crate::protocol::{ClientMessage, ErrorCode, ServerMessage, StateMessage};
use crate::server::Client;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Participant {
    Human,
    Computer { level: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Pit(usize),
    Undo,
    Redo,
    Hint,
    Quit,
}

/// Parses one prompt line. Pit numbers are 1-based.
pub fn parse_command(line: &str, pits_per_side: usize) -> Result<Command, String> {
    let word = line.trim().to_ascii_lowercase();
    match word.as_str() {
        "undo" | "u" => Ok(Command::Undo),
        "redo" | "r" => Ok(Command::Redo),
        "hint" | "h" => Ok(Command::Hint),
        "quit" | "q" | "exit" => Ok(Command::Quit),
        _ => match word.parse::<usize>() {
            Ok(n) if (1..=pits_per_side).contains(&n) => Ok(Command::Pit(n - 1)),
            _ => Err(format!("enter a pit 1-{pits_per_side}, or undo, redo, hint, quit")),
        },
    }
}

/// Two-row picture of the board as seen from South, followed by the board
/// text. North's pits run right to left along the top, kalahs at the ends.
pub fn render_board(state: &BoardState) -> String {
    let n = state.pits_per_side();
    let cell = |v: u32| format!("{v:>3} ");
    let mut north_labels = String::new();
    let mut north_row = String::new();
    for i in (0..n).rev() {
        north_labels.push_str(&format!("{:>3} ", i + 1));
        north_row.push_str(&cell(state.pits(Seat::North)[i]));
    }
    let mut south_labels = String::new();
    let mut south_row = String::new();
    for i in 0..n {
        south_labels.push_str(&format!("{:>3} ", i + 1));
        south_row.push_str(&cell(state.pits(Seat::South)[i]));
    }
    let gap = " ".repeat(4 * n);
    format!(
        "      {north_labels}  North\n      {north_row}\n {:>3}  {gap}  {:<3}\n      {south_row}\n      {south_labels}  South\n  [{state}]\n",
        state.kalah(Seat::North),
        state.kalah(Seat::South),
    )
}

fn describe_move(seat: Seat, who: &str, pit: usize, extra_turn: bool, captured: u32) -> String {
    let mut line = format!("{seat}{who} plays pit {}", pit + 1);
    if captured > 0 {
        line.push_str(&format!(", captures {captured}"));
    }
    if extra_turn {
        line.push_str(", plays again");
    }
    line
}

pub fn describe_result(state: &BoardState) -> String {
    let (s, n) = (state.kalah(Seat::South), state.kalah(Seat::North));
    match state.winner() {
        GameResult::Win(seat) => format!("Game over: {seat} wins {}-{}.", s.max(n), s.min(n)),
        GameResult::Draw => format!("Game over: draw {s}-{n}."),
        GameResult::Undecided => format!("Game stopped at {s}-{n}."),
    }
}

fn describe_hint(result: &SearchResult) -> String {
    match result.best_pit {
        Some(pit) => format!(
            "hint: pit {} (value {:+}, {} nodes searched)",
            pit + 1,
            result.value,
            result.nodes_generated()
        ),
        None => "no hint available".to_string(),
    }
}

fn illegal(err: MoveError) -> String {
    match err {
        MoveError::EmptyPit { pit } => format!("illegal move: pit {} is empty", pit + 1),
        MoveError::OutOfRange { pit, .. } => format!("illegal move: there is no pit {}", pit + 1),
    }
}

/// How a local game ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameEnd {
    Finished(BoardState),
    Quit(BoardState),
}

/// A game played entirely in this process.
pub struct LocalGame {
    rules: Rules,
    history: GameHistory,
    seats: [Participant; 2],
    coefficient: u32,
    hint_level: u8,
}

impl LocalGame {
    pub fn new(start: BoardState, rules: Rules, south: Participant, north: Participant, coefficient: u32) -> LocalGame {
        let hint_level = [south, north]
            .iter()
            .find_map(|p| match p {
                Participant::Computer { level } => Some(*level),
                Participant::Human => None,
            })
            .unwrap_or(1);
        LocalGame { rules, history: GameHistory::new(start), seats: [south, north], coefficient, hint_level }
    }

    pub fn history(&self) -> &GameHistory {
        &self.history
    }

    fn search(&self, level: u8) -> SearchResult {
        let params = SearchParams::for_level(level, self.coefficient).expect("level validated by caller");
        Searcher::new(self.rules).search(self.history.current(), &params)
    }

    /// With exactly one human, undo/redo jump between that human's turns so
    /// the computer's replies are skipped; otherwise they move one board.
    fn rewind_target(&self) -> Option<Seat> {
        let humans: Vec<Seat> = Seat::ALL.into_iter().filter(|s| self.seats[s.index()] == Participant::Human).collect();
        (humans.len() == 1).then(|| humans[0])
    }

    fn undo(&mut self) -> bool {
        if !self.history.can_undo() {
            return false;
        }
        let stop = self.rewind_target();
        while self.history.undo().is_some() {
            if stop.is_none_or(|seat| self.history.current().to_move() == seat) {
                break;
            }
        }
        true
    }

    fn redo(&mut self) -> bool {
        if !self.history.can_redo() {
            return false;
        }
        let stop = self.rewind_target();
        while self.history.redo().is_some() {
            if stop.is_none_or(|seat| self.history.current().to_move() == seat) {
                break;
            }
        }
        true
    }

    fn record(&mut self, pit: usize) -> Result<MoveOutcome, MoveError> {
        self.history.play(pit, &self.rules)
    }

    /// Runs the game to completion, reading human input from `input`.
    /// End of input counts as `quit`.
    pub fn run<R: BufRead, W: Write>(&mut self, mut input: R, mut out: W) -> io::Result<GameEnd> {
        write!(out, "{}", render_board(self.history.current()))?;
        loop {
            let state = self.history.current().clone();
            if state.is_terminal() {
                writeln!(out, "{}", describe_result(&state))?;
                return Ok(GameEnd::Finished(state));
            }
            let seat = state.to_move();
            match self.seats[seat.index()] {
                Participant::Computer { level } => {
                    let result = self.search(level);
                    let pit = result.best_pit.expect("non-terminal position has a move");
                    let outcome = self.record(pit).expect("search returns legal moves");
                    writeln!(
                        out,
                        "{}",
                        describe_move(seat, " (computer)", pit, outcome.extra_turn, outcome.captured)
                    )?;
                    write!(out, "{}", render_board(&outcome.state))?;
                }
                Participant::Human => {
                    write!(out, "{seat} to move [1-{}, undo, redo, hint, quit]> ", state.pits_per_side())?;
                    out.flush()?;
                    let mut line = String::new();
                    if input.read_line(&mut line)? == 0 {
                        writeln!(out)?;
                        return Ok(GameEnd::Quit(state));
                    }
                    match parse_command(&line, state.pits_per_side()) {
                        Err(msg) => writeln!(out, "{msg}")?,
                        Ok(Command::Quit) => return Ok(GameEnd::Quit(state)),
                        Ok(Command::Hint) => writeln!(out, "{}", describe_hint(&self.search(self.hint_level)))?,
                        Ok(Command::Undo) => {
                            if self.undo() {
                                write!(out, "{}", render_board(self.history.current()))?;
                            } else {
                                writeln!(out, "nothing to undo")?;
                            }
                        }
                        Ok(Command::Redo) => {
                            if self.redo() {
                                write!(out, "{}", render_board(self.history.current()))?;
                            } else {
                                writeln!(out, "nothing to redo")?;
                            }
                        }
                        Ok(Command::Pit(pit)) => match self.record(pit) {
                            Ok(outcome) => {
                                writeln!(out, "{}", describe_move(seat, "", pit, outcome.extra_turn, outcome.captured))?;
                                write!(out, "{}", render_board(&outcome.state))?;
                            }
                            Err(e) => writeln!(out, "{}", illegal(e))?,
                        },
                    }
                }
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NetPlayError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("server closed the connection")]
    Closed,
    #[error("server sent an unreadable board: {0}")]
    BadBoard(#[from] kalah_core::ParseBoardError),
}

/// Plays one seat of a server-hosted game. Returns the last board seen.
pub fn play_network<R: BufRead, W: Write>(
    client: &mut Client,
    me: Seat,
    mut input: R,
    mut out: W,
) -> Result<BoardState, NetPlayError> {
    let mut board: Option<BoardState> = None;
    let mut awaiting_input = false;
    loop {
        if awaiting_input {
            let current = board.as_ref().expect("input is only requested after a board arrives");
            write!(out, "{me} to move [1-{}, hint, quit]> ", current.pits_per_side())?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(current.clone());
            }
            let msg = match parse_command(&line, current.pits_per_side()) {
                Err(msg) => {
                    writeln!(out, "{msg}")?;
                    continue;
                }
                Ok(Command::Quit) => return Ok(current.clone()),
                Ok(Command::Pit(pit)) => ClientMessage::Move { pit },
                Ok(Command::Hint) => ClientMessage::Hint { level: None },
                Ok(Command::Undo) => ClientMessage::Undo,
                Ok(Command::Redo) => ClientMessage::Redo,
            };
            client.send(&msg)?;
            awaiting_input = false;
        }

        let msg = client.recv().ok_or(NetPlayError::Closed)?;
        match msg {
            ServerMessage::State(state) => {
                let next = state.decode_board()?;
                if let (Some(prev), Some(pit)) = (&board, state.pit) {
                    let who = if prev.to_move() == me { "" } else { " (opponent)" };
                    writeln!(out, "{}", describe_move(prev.to_move(), who, pit, state.extra_turn, state.captured))?;
                }
                write!(out, "{}", render_board(&next))?;
                if state.terminal {
                    writeln!(out, "{}", describe_result(&next))?;
                    return Ok(next);
                }
                awaiting_input = next.to_move() == me;
                if !awaiting_input {
                    writeln!(out, "waiting for {}...", next.to_move())?;
                }
                board = Some(next);
            }
            ServerMessage::HintResult { pit, value, nodes } => {
                match pit {
                    Some(pit) => writeln!(out, "hint: pit {} (value {value:+}, {nodes} nodes searched)", pit + 1)?,
                    None => writeln!(out, "no hint available")?,
                }
                awaiting_input = true;
            }
            ServerMessage::Error { code, message } => {
                writeln!(out, "{message}")?;
                if code == ErrorCode::Forfeit {
                    return Ok(board.unwrap_or_else(BoardState::initial));
                }
                awaiting_input = board.as_ref().is_some_and(|b| b.to_move() == me && !b.is_terminal())
                    && code != ErrorCode::OpponentDisconnected;
            }
            ServerMessage::Created { .. } | ServerMessage::Joined { .. } => {}
        }
    }
}

/// Shows a `state` event the way [`play_network`] would, for logs.
pub fn state_line(state: &StateMessage) -> String {
    let mut line = state.board.clone();
    if let Some(pit) = state.pit {
        line = format!("pit {} -> {line}", pit + 1);
    }
    line
}
