//! One-line board text: `p0,..,p5/K/q0,..,q5/L S`.
//!
//! `p` are South's pits in sowing order, `K` South's kalah, `q` North's pits,
//! `L` North's kalah, and the trailing letter (`S` or `N`) the side to move,
//! separated by exactly one space.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::board::{BoardState, Seat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseBoardError {
    /// A required field is absent.
    Missing(&'static str),
    /// A field is present but is not a non-negative integer (or list of them).
    InvalidNumber { field: &'static str, text: String },
    /// The side-to-move letter is not `S` or `N`.
    InvalidSide(String),
    /// Extra `/`-separated fields or trailing text.
    Trailing(String),
    /// South and North have a different number of pits.
    SideMismatch { south: usize, north: usize },
}

impl fmt::Display for ParseBoardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseBoardError::Missing(field) => write!(f, "missing {field}"),
            ParseBoardError::InvalidNumber { field, text } => {
                write!(f, "invalid {field}: {text:?}")
            }
            ParseBoardError::InvalidSide(text) => {
                write!(f, "invalid side to move: {text:?} (expected S or N)")
            }
            ParseBoardError::Trailing(text) => write!(f, "unexpected trailing text: {text:?}"),
            ParseBoardError::SideMismatch { south, north } => {
                write!(f, "south pits has {south} entries but north pits has {north}")
            }
        }
    }
}

impl core::error::Error for ParseBoardError {}

pub fn encode_board(state: &BoardState) -> String {
    state.to_string()
}

pub fn decode_board(text: &str) -> Result<BoardState, ParseBoardError> {
    text.parse()
}

impl fmt::Display for BoardState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn pits(f: &mut fmt::Formatter<'_>, pits: &[u32]) -> fmt::Result {
            for (i, p) in pits.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        }
        pits(f, self.pits(Seat::South))?;
        write!(f, "/{}/", self.kalah(Seat::South))?;
        pits(f, self.pits(Seat::North))?;
        write!(f, "/{} {}", self.kalah(Seat::North), self.to_move().letter())
    }
}

fn number(field: &'static str, text: &str) -> Result<u32, ParseBoardError> {
    // `u32::from_str` accepts a leading '+', which the format does not.
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseBoardError::InvalidNumber { field, text: text.to_string() });
    }
    text.parse().map_err(|_| ParseBoardError::InvalidNumber { field, text: text.to_string() })
}

fn pit_list(field: &'static str, text: &str) -> Result<Vec<u32>, ParseBoardError> {
    text.split(',').map(|p| number(field, p)).collect()
}

impl FromStr for BoardState {
    type Err = ParseBoardError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (board, side) = text.split_once(' ').ok_or(ParseBoardError::Missing("side to move"))?;
        let to_move = match side {
            "S" => Seat::South,
            "N" => Seat::North,
            "" => return Err(ParseBoardError::Missing("side to move")),
            other => return Err(ParseBoardError::InvalidSide(other.to_string())),
        };

        let mut fields = board.split('/');
        let mut next = |name: &'static str| fields.next().ok_or(ParseBoardError::Missing(name));
        let south = pit_list("south pits", next("south pits")?)?;
        let south_kalah = number("south kalah", next("south kalah")?)?;
        let north = pit_list("north pits", next("north pits")?)?;
        let north_kalah = number("north kalah", next("north kalah")?)?;
        if let Some(extra) = fields.next() {
            return Err(ParseBoardError::Trailing(extra.to_string()));
        }
        if south.len() != north.len() {
            return Err(ParseBoardError::SideMismatch { south: south.len(), north: north.len() });
        }
        Ok(BoardState::from_parts(&south, south_kalah, &north, north_kalah, to_move)
            .expect("pit lists are non-empty and of equal length"))
    }
}
