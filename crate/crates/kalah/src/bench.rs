//! Node-count comparison between the restricted alpha-beta search and the
//! size of the complete minimax tree.
//!
//! Sample positions come from seeded random playouts, so a report is a pure
//! function of its [`BenchConfig`].

use std::fmt::Write as _;
use std::io;
use std::ops::RangeInclusive;

use kalah_core::{full_tree_nodes, Algorithm, BoardState, Rules, Searcher};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Branching factor assumed by the baseline: one child per pit.
pub const BASELINE_BRANCHING: u64 = 6;

/// Draw attempts allowed per requested sample before giving up on a range
/// that only produces finished games.
const ATTEMPTS_PER_SAMPLE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub depths: Vec<u32>,
    pub samples: usize,
    pub rng_seed: u64,
    /// Number of random moves played from the start to reach a sample.
    pub playout_moves: RangeInclusive<u32>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { depths: vec![2, 4, 6, 8], samples: 100, rng_seed: 1, playout_moves: 0..=12 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("at least one sample is required")]
    NoSamples,
    #[error("at least one depth is required")]
    NoDepths,
    #[error("depths must be at least 1")]
    ZeroDepth,
    #[error("playout range {0}..{1} is empty")]
    EmptyRange(u32, u32),
    #[error("could not find {wanted} unfinished positions with playouts of {min}..{max} moves")]
    NoLivePositions { wanted: usize, min: u32, max: u32 },
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.samples == 0 {
            return Err(BenchError::NoSamples);
        }
        if self.depths.is_empty() {
            return Err(BenchError::NoDepths);
        }
        if self.depths.contains(&0) {
            return Err(BenchError::ZeroDepth);
        }
        if self.playout_moves.is_empty() {
            return Err(BenchError::EmptyRange(*self.playout_moves.start(), *self.playout_moves.end()));
        }
        Ok(())
    }
}

/// Positions reached by uniform random play from the standard start.
/// Finished games are discarded and redrawn.
pub fn sample_states(config: &BenchConfig) -> Result<Vec<BoardState>, BenchError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut states = Vec::with_capacity(config.samples);
    let mut attempts = 0;
    while states.len() < config.samples {
        if attempts == config.samples * ATTEMPTS_PER_SAMPLE {
            return Err(BenchError::NoLivePositions {
                wanted: config.samples,
                min: *config.playout_moves.start(),
                max: *config.playout_moves.end(),
            });
        }
        attempts += 1;
        let moves = rng.random_range(config.playout_moves.clone());
        let mut state = BoardState::initial();
        for _ in 0..moves {
            let legal = state.legal_moves();
            if legal.is_empty() {
                break;
            }
            let pit = legal[rng.random_range(0..legal.len())];
            state = state.apply_move(pit).expect("legal move").state;
        }
        if !state.is_terminal() {
            states.push(state);
        }
    }
    Ok(states)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub depth: u32,
    pub baseline_nodes: u64,
    /// Nodes generated for each sample, in sample order.
    pub sample_nodes: Vec<u64>,
    pub mean_nodes: f64,
    /// `mean_nodes / baseline_nodes`, a fraction in `(0, 1]`.
    pub percentage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub depths: Vec<DepthReport>,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let states = sample_states(config)?;
    let searcher = Searcher::new(Rules::default());
    let depths = config
        .depths
        .iter()
        .map(|&depth| {
            let sample_nodes: Vec<u64> = states
                .par_iter()
                .map(|s| {
                    searcher
                        .search_for(s, depth, s.to_move(), Algorithm::RestrictedAlphaBeta)
                        .nodes_generated()
                })
                .collect();
            let baseline_nodes = full_tree_nodes(depth, BASELINE_BRANCHING);
            let mean_nodes = sample_nodes.iter().sum::<u64>() as f64 / sample_nodes.len() as f64;
            DepthReport {
                depth,
                baseline_nodes,
                sample_nodes,
                mean_nodes,
                percentage: mean_nodes / baseline_nodes as f64,
            }
        })
        .collect();
    Ok(BenchReport { depths })
}

impl BenchReport {
    pub fn depth(&self, depth: u32) -> Option<&DepthReport> {
        self.depths.iter().find(|d| d.depth == depth)
    }

    /// `depth,sample,nodes,baseline,percentage` rows, followed for each depth
    /// by a `depth,MEAN,...` summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,sample,nodes,baseline,percentage\n");
        for d in &self.depths {
            for (i, nodes) in d.sample_nodes.iter().enumerate() {
                let pct = *nodes as f64 / d.baseline_nodes as f64;
                writeln!(out, "{},{},{},{},{:.4}", d.depth, i, nodes, d.baseline_nodes, pct).unwrap();
            }
            writeln!(out, "{},MEAN,{:.4},{},{:.4}", d.depth, d.mean_nodes, d.baseline_nodes, d.percentage)
                .unwrap();
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
