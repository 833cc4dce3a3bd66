//! Board model and Kalah rules.
//!
//! Seeds travel counterclockwise: a seat's pits are indexed `0..pits_per_side`
//! in sowing order, followed by that seat's kalah, followed by the opponent's
//! pits. The opponent's kalah is skipped.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// One of the two sides of the board. South moves first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seat {
    South,
    North,
}

impl Seat {
    pub const ALL: [Seat; 2] = [Seat::South, Seat::North];

    #[inline]
    pub fn opposite(self) -> Seat {
        match self {
            Seat::South => Seat::North,
            Seat::North => Seat::South,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Seat::South => 0,
            Seat::North => 1,
        }
    }

    /// Single-letter code used by the board text format.
    pub fn letter(self) -> char {
        match self {
            Seat::South => 'S',
            Seat::North => 'N',
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seat::South => "South",
            Seat::North => "North",
        })
    }
}

/// Rule switches that affect move execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rules {
    /// When set, landing in an empty own pit only captures if the opposite
    /// pit holds seeds. When clear, the landing seed is always banked.
    pub capture_requires_opposite_nonempty: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Rules { capture_requires_opposite_nonempty: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameConfig {
    pub pits_per_side: usize,
    pub seeds_per_pit: u32,
    pub capture_requires_opposite_nonempty: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { pits_per_side: 6, seeds_per_pit: 6, capture_requires_opposite_nonempty: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigError {
    NoPits,
    NoSeeds,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NoPits => f.write_str("pits_per_side must be at least 1"),
            ConfigError::NoSeeds => f.write_str("seeds_per_pit must be at least 1"),
        }
    }
}

impl core::error::Error for ConfigError {}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.pits_per_side == 0 {
            return Err(ConfigError::NoPits);
        }
        if self.seeds_per_pit == 0 {
            return Err(ConfigError::NoSeeds);
        }
        Ok(())
    }

    pub fn total_seeds(&self) -> u32 {
        2 * self.pits_per_side as u32 * self.seeds_per_pit
    }

    pub fn rules(&self) -> Rules {
        Rules { capture_requires_opposite_nonempty: self.capture_requires_opposite_nonempty }
    }

    /// Starting position: every pit filled, both kalahs empty, South to move.
    pub fn initial_board(&self) -> Result<BoardState, ConfigError> {
        self.validate()?;
        Ok(BoardState {
            pits: vec![self.seeds_per_pit; 2 * self.pits_per_side],
            kalahs: [0, 0],
            to_move: Seat::South,
        })
    }
}

/// A position: seed counts in every pit and kalah, plus the side to move.
///
/// Pits for both seats live in one buffer, South's first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoardState {
    pits: Vec<u32>,
    kalahs: [u32; 2],
    to_move: Seat,
}

/// Result of playing one pit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub state: BoardState,
    /// The last seed landed in the mover's own kalah.
    pub extra_turn: bool,
    /// Seeds banked by a capture, including the capturing seed. Zero if none.
    pub captured: u32,
    /// The game is over (the sweep has already been applied to `state`).
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveError {
    OutOfRange { pit: usize, pits_per_side: usize },
    EmptyPit { pit: usize },
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::OutOfRange { pit, pits_per_side } => {
                write!(f, "illegal move: pit {pit} is out of range (0..{pits_per_side})")
            }
            MoveError::EmptyPit { pit } => write!(f, "illegal move: pit {pit} is empty"),
        }
    }
}

impl core::error::Error for MoveError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameResult {
    Win(Seat),
    Draw,
    Undecided,
}

impl BoardState {
    /// Builds a position from explicit counts. Both sides must have the same
    /// non-zero number of pits.
    pub fn from_parts(
        south_pits: &[u32],
        south_kalah: u32,
        north_pits: &[u32],
        north_kalah: u32,
        to_move: Seat,
    ) -> Option<BoardState> {
        if south_pits.is_empty() || south_pits.len() != north_pits.len() {
            return None;
        }
        let mut pits = Vec::with_capacity(2 * south_pits.len());
        pits.extend_from_slice(south_pits);
        pits.extend_from_slice(north_pits);
        Some(BoardState { pits, kalahs: [south_kalah, north_kalah], to_move })
    }

    /// Standard 6x6 starting position.
    pub fn initial() -> BoardState {
        GameConfig::default().initial_board().expect("default config is valid")
    }

    #[inline]
    pub fn pits_per_side(&self) -> usize {
        self.pits.len() / 2
    }

    #[inline]
    pub fn pits(&self, seat: Seat) -> &[u32] {
        let n = self.pits_per_side();
        &self.pits[seat.index() * n..(seat.index() + 1) * n]
    }

    #[inline]
    pub fn kalah(&self, seat: Seat) -> u32 {
        self.kalahs[seat.index()]
    }

    #[inline]
    pub fn to_move(&self) -> Seat {
        self.to_move
    }

    pub fn with_to_move(mut self, seat: Seat) -> BoardState {
        self.to_move = seat;
        self
    }

    pub fn total_seeds(&self) -> u32 {
        self.pits.iter().sum::<u32>() + self.kalahs[0] + self.kalahs[1]
    }

    fn side_is_empty(&self, seat: Seat) -> bool {
        self.pits(seat).iter().all(|&s| s == 0)
    }

    /// Ascending indices of the mover's non-empty pits.
    pub fn legal_moves(&self) -> Vec<usize> {
        self.legal_moves_iter().collect()
    }

    pub fn legal_moves_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.pits(self.to_move).iter().enumerate().filter(|(_, &s)| s > 0).map(|(i, _)| i)
    }

    /// The side to move has nothing to sow.
    pub fn is_terminal(&self) -> bool {
        self.side_is_empty(self.to_move)
    }

    /// A seat holding more than half of all seeds has won, whether or not
    /// play is finished. Otherwise a finished game goes to the larger kalah.
    pub fn winner(&self) -> GameResult {
        let total = self.total_seeds();
        for seat in Seat::ALL {
            if 2 * self.kalah(seat) > total {
                return GameResult::Win(seat);
            }
        }
        if !self.is_terminal() {
            return GameResult::Undecided;
        }
        let (s, n) = (self.kalah(Seat::South), self.kalah(Seat::North));
        match s.cmp(&n) {
            core::cmp::Ordering::Greater => GameResult::Win(Seat::South),
            core::cmp::Ordering::Less => GameResult::Win(Seat::North),
            core::cmp::Ordering::Equal => GameResult::Draw,
        }
    }

    /// Plays `pit` under the standard rules.
    pub fn apply_move(&self, pit: usize) -> Result<MoveOutcome, MoveError> {
        self.apply_move_with(pit, &Rules::default())
    }

    pub fn apply_move_with(&self, pit: usize, rules: &Rules) -> Result<MoveOutcome, MoveError> {
        let n = self.pits_per_side();
        if pit >= n {
            return Err(MoveError::OutOfRange { pit, pits_per_side: n });
        }
        let mover = self.to_move;
        let opponent = mover.opposite();
        let own = mover.index() * n;
        let theirs = opponent.index() * n;

        let mut next = self.clone();
        let mut seeds = core::mem::take(&mut next.pits[own + pit]);
        if seeds == 0 {
            return Err(MoveError::EmptyPit { pit });
        }

        // Ring of 2n+1 slots: own pits, own kalah, opponent pits.
        let ring = 2 * n + 1;
        let laps = seeds / ring as u32;
        if laps > 0 {
            for slot in 0..ring {
                next.add_to_slot(slot, laps, own, theirs, mover, n);
            }
            seeds -= laps * ring as u32;
        }
        let mut slot = pit;
        // A whole number of laps still ends on the origin pit.
        let mut last = pit;
        while seeds > 0 {
            slot = (slot + 1) % ring;
            next.add_to_slot(slot, 1, own, theirs, mover, n);
            last = slot;
            seeds -= 1;
        }

        let extra_turn = last == n;
        let mut captured = 0;
        if last < n && next.pits[own + last] == 1 {
            let opposite = theirs + (n - 1 - last);
            let across = next.pits[opposite];
            if across > 0 || !rules.capture_requires_opposite_nonempty {
                captured = across + 1;
                next.pits[opposite] = 0;
                next.pits[own + last] = 0;
                next.kalahs[mover.index()] += captured;
            }
        }

        next.to_move = if extra_turn { mover } else { opponent };

        let terminal = next.side_is_empty(next.to_move);
        if terminal {
            let sweeper = next.to_move.opposite();
            let base = sweeper.index() * n;
            let swept: u32 = next.pits[base..base + n].iter().sum();
            next.pits[base..base + n].iter_mut().for_each(|s| *s = 0);
            next.kalahs[sweeper.index()] += swept;
        }

        Ok(MoveOutcome { state: next, extra_turn, captured, terminal })
    }

    #[inline]
    fn add_to_slot(&mut self, slot: usize, count: u32, own: usize, theirs: usize, mover: Seat, n: usize) {
        if slot < n {
            self.pits[own + slot] += count;
        } else if slot == n {
            self.kalahs[mover.index()] += count;
        } else {
            self.pits[theirs + slot - n - 1] += count;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(s: [u32; 6], sk: u32, n: [u32; 6], nk: u32, to_move: Seat) -> BoardState {
        BoardState::from_parts(&s, sk, &n, nk, to_move).unwrap()
    }

    #[test]
    fn seat_opposite_is_involution() {
        for seat in Seat::ALL {
            assert_eq!(seat.opposite().opposite(), seat);
            assert_ne!(seat.opposite(), seat);
        }
    }

    #[test]
    fn default_initial_board() {
        let b = BoardState::initial();
        assert_eq!(b.pits(Seat::South), &[6; 6]);
        assert_eq!(b.pits(Seat::North), &[6; 6]);
        assert_eq!(b.kalah(Seat::South), 0);
        assert_eq!(b.kalah(Seat::North), 0);
        assert_eq!(b.to_move(), Seat::South);
        assert_eq!(b.total_seeds(), 72);
        assert_eq!(GameConfig::default().total_seeds(), 72);
    }

    #[test]
    fn minimal_config() {
        let cfg = GameConfig { pits_per_side: 1, seeds_per_pit: 1, ..GameConfig::default() };
        let b = cfg.initial_board().unwrap();
        assert_eq!(b.pits(Seat::South), &[1]);
        assert_eq!(b.pits(Seat::North), &[1]);
        assert_eq!((b.kalah(Seat::South), b.kalah(Seat::North)), (0, 0));
    }

    #[test]
    fn invalid_config_rejected() {
        let zero_pits = GameConfig { pits_per_side: 0, ..GameConfig::default() };
        assert_eq!(zero_pits.initial_board(), Err(ConfigError::NoPits));
        let zero_seeds = GameConfig { seeds_per_pit: 0, ..GameConfig::default() };
        assert_eq!(zero_seeds.initial_board(), Err(ConfigError::NoSeeds));
    }

    #[test]
    fn legal_moves_examples() {
        assert_eq!(BoardState::initial().legal_moves(), [0, 1, 2, 3, 4, 5]);
        let b = board([0, 3, 0, 0, 1, 0], 0, [6; 6], 0, Seat::South);
        assert_eq!(b.legal_moves(), [1, 4]);
        let empty = board([0; 6], 30, [6; 6], 6, Seat::South);
        assert!(empty.legal_moves().is_empty());
    }

    #[test]
    fn illegal_moves_rejected() {
        let b = board([0, 3, 0, 0, 1, 0], 0, [6; 6], 0, Seat::South);
        assert_eq!(b.apply_move(0), Err(MoveError::EmptyPit { pit: 0 }));
        assert_eq!(b.apply_move(6), Err(MoveError::OutOfRange { pit: 6, pits_per_side: 6 }));
    }

    #[test]
    fn opening_pit_zero_earns_extra_turn() {
        let out = BoardState::initial().apply_move(0).unwrap();
        assert_eq!(out.state.pits(Seat::South), &[0, 7, 7, 7, 7, 7]);
        assert_eq!(out.state.kalah(Seat::South), 1);
        assert_eq!(out.state.pits(Seat::North), &[6; 6]);
        assert!(out.extra_turn);
        assert_eq!(out.captured, 0);
        assert!(!out.terminal);
        assert_eq!(out.state.to_move(), Seat::South);
    }

    #[test]
    fn opening_pit_two_passes_turn() {
        let out = BoardState::initial().apply_move(2).unwrap();
        assert_eq!(out.state.pits(Seat::South), &[6, 6, 0, 7, 7, 7]);
        assert_eq!(out.state.kalah(Seat::South), 1);
        assert_eq!(out.state.pits(Seat::North), &[7, 7, 6, 6, 6, 6]);
        assert!(!out.extra_turn);
        assert_eq!(out.captured, 0);
        assert_eq!(out.state.to_move(), Seat::North);
    }

    #[test]
    fn capture_into_empty_own_pit() {
        let b = board([1, 0, 4, 0, 0, 0], 10, [2, 3, 1, 0, 6, 2], 7, Seat::South);
        let out = b.apply_move(0).unwrap();
        assert_eq!(out.captured, 7);
        assert_eq!(out.state.kalah(Seat::South), 17);
        assert_eq!(out.state.pits(Seat::North)[4], 0);
        assert_eq!(out.state.pits(Seat::South)[1], 0);
        assert_eq!(out.state.to_move(), Seat::North);
    }

    #[test]
    fn capture_against_empty_pit_depends_on_rule() {
        // North pit 4 (opposite South pit 1) is empty.
        let b = board([1, 0, 4, 0, 0, 0], 10, [2, 3, 1, 0, 0, 2], 7, Seat::South);
        let strict = b.apply_move(0).unwrap();
        assert_eq!(strict.captured, 0);
        assert_eq!(strict.state.pits(Seat::South)[1], 1);

        let lax = Rules { capture_requires_opposite_nonempty: false };
        let out = b.apply_move_with(0, &lax).unwrap();
        assert_eq!(out.captured, 1);
        assert_eq!(out.state.pits(Seat::South)[1], 0);
        assert_eq!(out.state.kalah(Seat::South), 11);
    }

    #[test]
    fn north_sows_into_own_kalah_and_skips_south_kalah() {
        // North pit 5 with 9 seeds: kalah, South pits 0..5, skip South kalah, North pit 0, 1.
        let b = board([1; 6], 4, [0, 0, 0, 0, 0, 9], 3, Seat::North);
        let out = b.apply_move(5).unwrap();
        // Last seed in empty North pit 1, opposite South pit 4 holds 2.
        assert_eq!(out.captured, 3);
        assert_eq!(out.state.kalah(Seat::North), 4 + 3);
        assert_eq!(out.state.kalah(Seat::South), 4);
        assert_eq!(out.state.pits(Seat::South), &[2, 2, 2, 2, 0, 2]);
        assert_eq!(out.state.pits(Seat::North), &[1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn wrapping_sow_refills_origin_pit() {
        // 13 seeds from pit 0 visit all 13 slots and end back in pit 0.
        let b = board([13, 0, 0, 0, 0, 0], 0, [1; 6], 0, Seat::South);
        let out = b.apply_move(0).unwrap();
        assert_eq!(out.state.pits(Seat::South)[0], 0, "origin captured");
        assert_eq!(out.captured, 1 + 2);
        assert_eq!(out.state.pits(Seat::South), &[0, 1, 1, 1, 1, 1]);
        assert_eq!(out.state.kalah(Seat::South), 1 + 3);
        assert_eq!(out.state.pits(Seat::North), &[2, 2, 2, 2, 2, 0]);
        assert_eq!(out.state.total_seeds(), b.total_seeds());
    }

    #[test]
    fn large_pile_wraps_several_laps() {
        let b = board([30, 0, 0, 0, 0, 0], 0, [0; 6], 0, Seat::South);
        let out = b.apply_move(0).unwrap();
        assert_eq!(out.state.total_seeds(), 30);
        // 30 = 2 laps of 13 + 4: slots 1..=4 get a third seed.
        assert_eq!(out.state.kalah(Seat::South), 2);
        assert_eq!(out.state.pits(Seat::South), &[2, 3, 3, 3, 3, 2]);
        assert_eq!(out.state.pits(Seat::North), &[2; 6]);
    }

    #[test]
    fn emptying_opponent_ends_game_with_sweep() {
        // South's pit 5 with 1 seed goes to the kalah: extra turn, but South
        // then has nothing left, so North sweeps.
        let b = board([0, 0, 0, 0, 0, 1], 30, [1, 2, 3, 0, 0, 0], 35, Seat::South);
        let out = b.apply_move(5).unwrap();
        assert!(out.extra_turn);
        assert!(out.terminal);
        assert_eq!(out.state.kalah(Seat::South), 31);
        assert_eq!(out.state.kalah(Seat::North), 41);
        assert!(out.state.pits(Seat::North).iter().all(|&s| s == 0));
        assert!(out.state.is_terminal());
        assert_eq!(out.state.winner(), GameResult::Win(Seat::North));
    }

    #[test]
    fn terminal_detection() {
        assert!(!BoardState::initial().is_terminal());
        assert!(board([0; 6], 40, [0; 6], 32, Seat::North).is_terminal());
        assert!(!board([0, 0, 0, 0, 0, 1], 40, [0; 6], 31, Seat::South).is_terminal());
    }

    #[test]
    fn winner_examples() {
        assert_eq!(BoardState::initial().winner(), GameResult::Undecided);
        let early = board([3; 6], 37, [1, 0, 0, 0, 0, 0], 16, Seat::North);
        assert_eq!(early.winner(), GameResult::Win(Seat::South));
        assert_eq!(board([0; 6], 36, [0; 6], 36, Seat::South).winner(), GameResult::Draw);
        // 36 of 72 is not more than half.
        let half = board([6, 0, 0, 0, 0, 0], 36, [6, 6, 6, 6, 6, 0], 0, Seat::South);
        assert_eq!(half.winner(), GameResult::Undecided);
    }
}
