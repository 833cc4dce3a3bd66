//! Depth-limited minimax for Kalah.
//!
//! A move that ends in the mover's own kalah gives the same seat another
//! move, so MAX and MIN do not strictly alternate with depth: a node is MAX
//! exactly when the seat to move is the seat the search was started for.
//!
//! Two algorithms are provided:
//!
//! * [`Algorithm::Plain`] expands every legal move down to the horizon.
//! * [`Algorithm::RestrictedAlphaBeta`] carries an `(alpha, beta)` window
//!   through the whole tree but only tests for a cutoff at nodes whose kind
//!   differs from their parent's (a MAX node under a MIN node or the
//!   reverse). Under an extra turn the node and its parent have the same kind
//!   and all of the node's children are explored.
//!
//! Both count every board they construct, root and leaves included, and
//! return the same value and the same best pit.

use core::fmt;

use crate::board::{BoardState, Rules, Seat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Max,
    Min,
}

impl NodeKind {
    pub fn of(state: &BoardState, root_seat: Seat) -> NodeKind {
        if state.to_move() == root_seat {
            NodeKind::Max
        } else {
            NodeKind::Min
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Plain,
    RestrictedAlphaBeta,
    /// Prunes at every node, ignoring turn alternation. Experimental.
    #[cfg(feature = "unrestricted-ab")]
    UnrestrictedAlphaBeta,
}

/// Scores a position from `root_seat`'s point of view. Positive is good for
/// the root seat.
pub trait Evaluator {
    fn evaluate(&self, state: &BoardState, root_seat: Seat) -> i32;
}

impl<F> Evaluator for F
where
    F: Fn(&BoardState, Seat) -> i32,
{
    fn evaluate(&self, state: &BoardState, root_seat: Seat) -> i32 {
        self(state, root_seat)
    }
}

/// Kalah differential. On a terminal (swept) board this is the final margin.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KalahDifference;

impl Evaluator for KalahDifference {
    fn evaluate(&self, state: &BoardState, root_seat: Seat) -> i32 {
        evaluate(state, root_seat)
    }
}

pub fn evaluate(state: &BoardState, root_seat: Seat) -> i32 {
    state.kalah(root_seat) as i32 - state.kalah(root_seat.opposite()) as i32
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Boards constructed, including the root.
    pub nodes_generated: u64,
    /// Nodes that stopped expanding children because of the window.
    pub cutoffs: u64,
    /// Cutoffs taken at a node of the same kind as its parent. Always zero
    /// for the restricted algorithm.
    pub same_kind_cutoffs: u64,
    /// Parent/child pairs whose node kinds are equal.
    pub same_kind_edges: u64,
    /// Edges whose move earned the mover an extra turn.
    pub extra_turn_edges: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// `None` when the root is terminal or the depth is zero.
    pub best_pit: Option<usize>,
    pub value: i32,
    pub depth: u32,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn nodes_generated(&self) -> u64 {
        self.stats.nodes_generated
    }
}

/// Highest supported level.
pub const MAX_LEVEL: u8 = 4;
/// Largest level-to-depth coefficient accepted for interactive play
/// (`MAX_LEVEL * coefficient` stays at or below 12 plies).
pub const MAX_COEFFICIENT: u32 = 3;
pub const DEFAULT_COEFFICIENT: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelError {
    Level(u8),
    Coefficient(u32),
}

impl fmt::Display for LevelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelError::Level(l) => write!(f, "level {l} is outside 1..={MAX_LEVEL}"),
            LevelError::Coefficient(c) => {
                write!(f, "coefficient {c} is outside 1..={MAX_COEFFICIENT}")
            }
        }
    }
}

impl core::error::Error for LevelError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    pub depth: u32,
    pub algorithm: Algorithm,
    pub level: Option<u8>,
    pub coefficient: u32,
}

impl SearchParams {
    pub fn with_depth(depth: u32, algorithm: Algorithm) -> SearchParams {
        SearchParams { depth, algorithm, level: None, coefficient: DEFAULT_COEFFICIENT }
    }

    /// Difficulty level `1..=4`; the search depth is `coefficient * level`.
    pub fn for_level(level: u8, coefficient: u32) -> Result<SearchParams, LevelError> {
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(LevelError::Level(level));
        }
        if !(1..=MAX_COEFFICIENT).contains(&coefficient) {
            return Err(LevelError::Coefficient(coefficient));
        }
        Ok(SearchParams {
            depth: coefficient * level as u32,
            algorithm: Algorithm::RestrictedAlphaBeta,
            level: Some(level),
            coefficient,
        })
    }
}

/// Runs searches under a fixed rule set and evaluation function.
#[derive(Debug, Clone, Default)]
pub struct Searcher<E = KalahDifference> {
    rules: Rules,
    evaluator: E,
}

impl Searcher<KalahDifference> {
    pub fn new(rules: Rules) -> Self {
        Searcher { rules, evaluator: KalahDifference }
    }
}

impl<E: Evaluator> Searcher<E> {
    pub fn with_evaluator(rules: Rules, evaluator: E) -> Self {
        Searcher { rules, evaluator }
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    /// Searches for the seat to move.
    pub fn search(&self, state: &BoardState, params: &SearchParams) -> SearchResult {
        self.search_for(state, params.depth, state.to_move(), params.algorithm)
    }

    pub fn search_for(
        &self,
        state: &BoardState,
        depth: u32,
        root_seat: Seat,
        algorithm: Algorithm,
    ) -> SearchResult {
        let mut walk = Walk {
            rules: &self.rules,
            evaluator: &self.evaluator,
            root_seat,
            algorithm,
            stats: SearchStats { nodes_generated: 1, ..SearchStats::default() },
        };
        // The root has no parent; it is allowed to cut like an alternating node.
        let (value, best_pit) = walk.node(state, depth, i32::MIN, i32::MAX, true);
        SearchResult { best_pit, value, depth, stats: walk.stats }
    }
}

struct Walk<'a, E> {
    rules: &'a Rules,
    evaluator: &'a E,
    root_seat: Seat,
    algorithm: Algorithm,
    stats: SearchStats,
}

impl<E: Evaluator> Walk<'_, E> {
    fn node(
        &mut self,
        state: &BoardState,
        depth: u32,
        mut alpha: i32,
        mut beta: i32,
        alternates: bool,
    ) -> (i32, Option<usize>) {
        if depth == 0 || state.is_terminal() {
            return (self.evaluator.evaluate(state, self.root_seat), None);
        }
        let kind = NodeKind::of(state, self.root_seat);
        let may_cut = match self.algorithm {
            Algorithm::Plain => false,
            Algorithm::RestrictedAlphaBeta => alternates,
            #[cfg(feature = "unrestricted-ab")]
            Algorithm::UnrestrictedAlphaBeta => true,
        };
        let windowed = self.algorithm != Algorithm::Plain;

        let mut best_value = match kind {
            NodeKind::Max => i32::MIN,
            NodeKind::Min => i32::MAX,
        };
        let mut best_pit = None;

        let n = state.pits_per_side();
        for pit in 0..n {
            if state.pits(state.to_move())[pit] == 0 {
                continue;
            }
            let outcome = state
                .apply_move_with(pit, self.rules)
                .expect("non-empty pit of the side to move is a legal move");
            self.stats.nodes_generated += 1;
            let child_kind = NodeKind::of(&outcome.state, self.root_seat);
            let same_kind = child_kind == kind;
            if same_kind {
                self.stats.same_kind_edges += 1;
            }
            if outcome.extra_turn {
                self.stats.extra_turn_edges += 1;
            }

            let (value, _) = self.node(&outcome.state, depth - 1, alpha, beta, !same_kind);

            let improves = match kind {
                NodeKind::Max => value > best_value,
                NodeKind::Min => value < best_value,
            };
            if improves || best_pit.is_none() {
                best_value = value;
                best_pit = Some(pit);
            }

            if windowed {
                let cut = match kind {
                    NodeKind::Max => {
                        alpha = alpha.max(best_value);
                        best_value >= beta
                    }
                    NodeKind::Min => {
                        beta = beta.min(best_value);
                        best_value <= alpha
                    }
                };
                if cut && may_cut {
                    self.stats.cutoffs += 1;
                    if !alternates {
                        self.stats.same_kind_cutoffs += 1;
                    }
                    break;
                }
            }
        }
        (best_value, best_pit)
    }
}

/// Extra-turn-aware minimax without pruning, standard rules.
pub fn minimax_plain(state: &BoardState, depth: u32, root_seat: Seat) -> SearchResult {
    Searcher::new(Rules::default()).search_for(state, depth, root_seat, Algorithm::Plain)
}

/// Alpha-beta restricted to alternating nodes, standard rules.
pub fn minimax_restricted_ab(state: &BoardState, depth: u32, root_seat: Seat) -> SearchResult {
    Searcher::new(Rules::default()).search_for(
        state,
        depth,
        root_seat,
        Algorithm::RestrictedAlphaBeta,
    )
}

/// Difficulty-level move choice for the seat to move, standard rules.
pub fn best_move(state: &BoardState, level: u8, coefficient: u32) -> Result<SearchResult, LevelError> {
    let params = SearchParams::for_level(level, coefficient)?;
    Ok(Searcher::new(Rules::default()).search(state, &params))
}

/// Size of the complete tree with uniform `branching`: the sum of
/// `branching^i` for `i` in `0..=depth`. Saturates at `u64::MAX`.
pub fn full_tree_nodes(depth: u32, branching: u64) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(branching);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn board(s: [u32; 6], sk: u32, n: [u32; 6], nk: u32, to_move: Seat) -> BoardState {
        BoardState::from_parts(&s, sk, &n, nk, to_move).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let even = board([0; 6], 36, [0; 6], 36, Seat::South);
        assert_eq!(evaluate(&even, Seat::South), 0);
        let b = board([0; 6], 40, [0; 6], 32, Seat::South);
        assert_eq!(evaluate(&b, Seat::South), 8);
        assert_eq!(evaluate(&b, Seat::North), -8);
    }

    #[test]
    fn full_tree_sizes() {
        assert_eq!(full_tree_nodes(0, 6), 1);
        assert_eq!(full_tree_nodes(2, 6), 43);
        assert_eq!(full_tree_nodes(4, 6), 1555);
        assert_eq!(full_tree_nodes(6, 6), 55_987);
        assert_eq!(full_tree_nodes(8, 6), 2_015_539);
        assert_eq!(full_tree_nodes(3, 1), 4);
        assert_eq!(full_tree_nodes(200, 6), u64::MAX);
        // Closed form (b^(n+1) - 1) / (b - 1).
        for n in 0..=12u32 {
            assert_eq!(full_tree_nodes(n, 6), (6u64.pow(n + 1) - 1) / 5);
        }
    }

    #[test]
    fn level_mapping() {
        assert_eq!(SearchParams::for_level(1, 2).unwrap().depth, 2);
        assert_eq!(SearchParams::for_level(2, 2).unwrap().depth, 4);
        assert_eq!(SearchParams::for_level(4, 2).unwrap().depth, 8);
        assert_eq!(SearchParams::for_level(4, 3).unwrap().depth, 12);
        assert_eq!(SearchParams::for_level(0, 2), Err(LevelError::Level(0)));
        assert_eq!(SearchParams::for_level(5, 2), Err(LevelError::Level(5)));
        assert_eq!(SearchParams::for_level(1, 0), Err(LevelError::Coefficient(0)));
        assert_eq!(SearchParams::for_level(1, 4), Err(LevelError::Coefficient(4)));
    }

    #[test]
    fn best_move_uses_level_depth() {
        let r = best_move(&BoardState::initial(), 1, 2).unwrap();
        assert_eq!(r.depth, 2);
        let direct = minimax_restricted_ab(&BoardState::initial(), 2, Seat::South);
        assert_eq!(r, direct);
        assert!(best_move(&BoardState::initial(), 7, 2).is_err());
    }

    #[test]
    fn depth_zero_is_evaluation() {
        let b = board([1, 2, 3, 4, 5, 6], 10, [6, 5, 4, 3, 2, 1], 4, Seat::North);
        for r in [minimax_plain(&b, 0, Seat::North), minimax_restricted_ab(&b, 0, Seat::North)] {
            assert_eq!(r.value, -6);
            assert_eq!(r.nodes_generated(), 1);
            assert_eq!(r.best_pit, None);
        }
    }

    #[test]
    fn terminal_root_has_no_move() {
        let b = board([0; 6], 40, [0; 6], 32, Seat::North);
        let r = minimax_plain(&b, 4, Seat::North);
        assert_eq!((r.best_pit, r.value, r.nodes_generated()), (None, -8, 1));
    }

    #[test]
    fn plain_depth_two_from_start() {
        // Pit 0 earns an extra turn and leaves South five replies; every
        // other opening leaves North six.
        let r = minimax_plain(&BoardState::initial(), 2, Seat::South);
        assert_eq!(r.nodes_generated(), 1 + 6 + 5 + 5 * 6);
        assert!(r.nodes_generated() <= full_tree_nodes(2, 6));
    }

    #[test]
    fn depth_one_picks_first_best_gain() {
        // Brute force: the best immediate kalah gain over all openings.
        let start = BoardState::initial();
        let scores: Vec<i32> = start
            .legal_moves()
            .into_iter()
            .map(|p| evaluate(&start.apply_move(p).unwrap().state, Seat::South))
            .collect();
        let best = *scores.iter().max().unwrap();
        let first = scores.iter().position(|&s| s == best).unwrap();
        let r = minimax_plain(&start, 1, Seat::South);
        assert_eq!(r.value, best);
        assert_eq!(r.best_pit, Some(first));
        assert_eq!(r.value, 1);
        assert_eq!(r.best_pit, Some(0));
    }

    #[test]
    fn root_seat_other_than_mover_minimizes() {
        let start = BoardState::initial();
        let r = minimax_plain(&start, 1, Seat::North);
        assert_eq!(r.value, -1);
        assert_eq!(r.best_pit, Some(0));
    }

    #[test]
    fn restricted_matches_plain_at_start() {
        let start = BoardState::initial();
        for depth in 0..=6 {
            let p = minimax_plain(&start, depth, Seat::South);
            let r = minimax_restricted_ab(&start, depth, Seat::South);
            assert_eq!((p.value, p.best_pit), (r.value, r.best_pit), "depth {depth}");
            assert!(r.nodes_generated() <= p.nodes_generated());
            assert_eq!(r.stats.same_kind_cutoffs, 0);
            assert_eq!(p.stats.cutoffs, 0);
        }
    }

    #[test]
    fn same_kind_edges_are_exactly_extra_turns() {
        let start = BoardState::initial();
        let p = minimax_plain(&start, 4, Seat::South);
        assert_eq!(p.stats.same_kind_edges, p.stats.extra_turn_edges);
        assert!(p.stats.extra_turn_edges > 0);
    }

    #[test]
    fn scaled_evaluation_keeps_best_pit() {
        let start = BoardState::initial().apply_move(2).unwrap().state;
        let scaled = Searcher::with_evaluator(Rules::default(), |s: &BoardState, root: Seat| {
            7 * evaluate(s, root)
        });
        for algorithm in [Algorithm::Plain, Algorithm::RestrictedAlphaBeta] {
            let base = Searcher::new(Rules::default()).search_for(&start, 4, Seat::North, algorithm);
            let r = scaled.search_for(&start, 4, Seat::North, algorithm);
            assert_eq!(r.best_pit, base.best_pit);
            assert_eq!(r.value, 7 * base.value);
        }
    }
}
