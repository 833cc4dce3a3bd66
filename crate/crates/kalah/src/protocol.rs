//! Wire messages shared by the newline-delimited JSON transport and the
//! WebSocket endpoint. Every message is a JSON object whose `type` field
//! names the variant.
//!
//! Pits are addressed by their 0-based index in sowing order. Boards travel
//! in the one-line board text format (`6,6,6,6,6,6/0/6,6,6,6,6,6/0 S`).

use kalah_core::{BoardState, GameConfig, GameResult, MoveOutcome, Seat};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Two humans on separate connections.
    HvhNet,
    /// Human (South) against the computer (North).
    Hvc,
    /// Computer against computer.
    Cvc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WireSeat {
    South,
    North,
}

impl From<Seat> for WireSeat {
    fn from(seat: Seat) -> Self {
        match seat {
            Seat::South => WireSeat::South,
            Seat::North => WireSeat::North,
        }
    }
}

impl From<WireSeat> for Seat {
    fn from(seat: WireSeat) -> Self {
        match seat {
            WireSeat::South => Seat::South,
            WireSeat::North => Seat::North,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WireWinner {
    South,
    North,
    Draw,
}

impl WireWinner {
    pub fn from_result(result: GameResult) -> Option<WireWinner> {
        match result {
            GameResult::Win(Seat::South) => Some(WireWinner::South),
            GameResult::Win(Seat::North) => Some(WireWinner::North),
            GameResult::Draw => Some(WireWinner::Draw),
            GameResult::Undecided => None,
        }
    }
}

/// Optional board configuration on `create`; missing fields take defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pits_per_side: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds_per_pit: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_requires_opposite_nonempty: Option<bool>,
}

impl WireConfig {
    pub fn to_config(self) -> GameConfig {
        let d = GameConfig::default();
        GameConfig {
            pits_per_side: self.pits_per_side.unwrap_or(d.pits_per_side),
            seeds_per_pit: self.seeds_per_pit.unwrap_or(d.seeds_per_pit),
            capture_requires_opposite_nonempty: self
                .capture_requires_opposite_nonempty
                .unwrap_or(d.capture_requires_opposite_nonempty),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Create {
        mode: Mode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level: Option<u8>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        config: Option<WireConfig>,
    },
    Join {
        session_id: String,
    },
    Move {
        pit: usize,
    },
    /// Asks for a suggested move. `level` defaults to the session's level.
    Hint {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level: Option<u8>,
    },
    Undo,
    Redo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadRequest,
    InvalidMode,
    InvalidLevel,
    InvalidConfig,
    NotFound,
    SessionFull,
    NotInSession,
    NotActive,
    OutOfTurn,
    IllegalMove,
    NoHint,
    Forbidden,
    Boundary,
    OpponentDisconnected,
    Forfeit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateMessage {
    pub board: String,
    pub extra_turn: bool,
    pub captured: u32,
    pub terminal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winner: Option<WireWinner>,
    /// Pit whose sowing produced this board, when the event is a move.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pit: Option<usize>,
}

impl StateMessage {
    /// A board shown without a move (session start, undo, redo).
    pub fn still(state: &BoardState) -> StateMessage {
        StateMessage {
            board: state.to_string(),
            extra_turn: false,
            captured: 0,
            terminal: state.is_terminal(),
            winner: WireWinner::from_result(state.winner()),
            pit: None,
        }
    }

    pub fn after_move(pit: usize, outcome: &MoveOutcome) -> StateMessage {
        StateMessage {
            board: outcome.state.to_string(),
            extra_turn: outcome.extra_turn,
            captured: outcome.captured,
            terminal: outcome.terminal,
            winner: WireWinner::from_result(outcome.state.winner()),
            pit: Some(pit),
        }
    }

    pub fn decode_board(&self) -> Result<BoardState, kalah_core::ParseBoardError> {
        self.board.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Created {
        session_id: String,
        /// `null` when the creator only watches (computer against computer).
        seat: Option<WireSeat>,
    },
    Joined {
        seat: WireSeat,
    },
    State(StateMessage),
    HintResult {
        pit: Option<usize>,
        value: i32,
        nodes: u64,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

impl ServerMessage {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> ServerMessage {
        ServerMessage::Error { code, message: message.into() }
    }
}
