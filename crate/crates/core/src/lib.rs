//! Kalah(6,6) rules and game-tree search.
//!
//! This crate has no IO and only needs `alloc`. It contains:
//!
//! * [`board`]: the board model, sowing, captures, extra turns and the
//!   end-of-game sweep.
//! * [`notation`]: the one-line board text format used by the CLI and the
//!   wire protocol.
//! * [`history`]: the per-game sequence of boards with undo/redo.
//! * [`search`]: minimax that follows extra turns, and the alpha-beta variant
//!   that only prunes where MAX and MIN actually alternate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod board;
pub mod history;
pub mod notation;
pub mod search;

pub use board::{BoardState, ConfigError, GameConfig, GameResult, MoveError, MoveOutcome, Rules, Seat};
pub use history::{GameHistory, HistoryEntry, ReplayMismatch};
pub use notation::{decode_board, encode_board, ParseBoardError};
pub use search::{
    best_move, evaluate, full_tree_nodes, minimax_plain, minimax_restricted_ab, Algorithm,
    Evaluator, KalahDifference, LevelError, NodeKind, SearchParams, SearchResult, SearchStats,
    Searcher, DEFAULT_COEFFICIENT, MAX_COEFFICIENT, MAX_LEVEL,
};
