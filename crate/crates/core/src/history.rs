//! Sequence of boards reached during a game, with a cursor for undo/redo.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::board::{BoardState, MoveError, MoveOutcome, Rules};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryEntry {
    pub state: BoardState,
    /// Pit played to reach `state`; `None` for the initial board.
    pub played: Option<usize>,
}

/// Ordered boards of one game. `entries[0]` is the starting board and the
/// cursor marks the current one; entries after the cursor are the redo tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameHistory {
    entries: Vec<HistoryEntry>,
    cursor: usize,
}

/// Replaying the recorded moves diverged from what was stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayMismatch {
    pub index: usize,
}

impl fmt::Display for ReplayMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "replay diverges from recorded history at entry {}", self.index)
    }
}

impl core::error::Error for ReplayMismatch {}

impl GameHistory {
    pub fn new(initial: BoardState) -> GameHistory {
        GameHistory { entries: vec![HistoryEntry { state: initial, played: None }], cursor: 0 }
    }

    pub fn current(&self) -> &BoardState {
        &self.entries[self.cursor].state
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn can_undo(&self) -> bool {
        self.cursor > 0
    }

    pub fn can_redo(&self) -> bool {
        self.cursor + 1 < self.entries.len()
    }

    /// Drops the redo tail, appends `state` and makes it current.
    pub fn push(&mut self, played: usize, state: BoardState) {
        self.entries.truncate(self.cursor + 1);
        self.entries.push(HistoryEntry { state, played: Some(played) });
        self.cursor += 1;
    }

    /// Plays `pit` on the current board and records the result.
    pub fn play(&mut self, pit: usize, rules: &Rules) -> Result<MoveOutcome, MoveError> {
        let outcome = self.current().apply_move_with(pit, rules)?;
        self.push(pit, outcome.state.clone());
        Ok(outcome)
    }

    /// Steps back one board. Returns `None` when already at the start.
    pub fn undo(&mut self) -> Option<&BoardState> {
        if !self.can_undo() {
            return None;
        }
        self.cursor -= 1;
        Some(self.current())
    }

    /// Steps forward one board. Returns `None` when there is nothing to redo.
    pub fn redo(&mut self) -> Option<&BoardState> {
        if !self.can_redo() {
            return None;
        }
        self.cursor += 1;
        Some(self.current())
    }

    /// Re-applies every recorded move from the first board and checks that
    /// each stored board is reproduced exactly.
    pub fn verify_replay(&self, rules: &Rules) -> Result<(), ReplayMismatch> {
        let mut state = self.entries[0].state.clone();
        for (index, entry) in self.entries.iter().enumerate().skip(1) {
            let pit = entry.played.ok_or(ReplayMismatch { index })?;
            state = state.apply_move_with(pit, rules).map_err(|_| ReplayMismatch { index })?.state;
            if state != entry.state {
                return Err(ReplayMismatch { index });
            }
        }
        Ok(())
    }
}
