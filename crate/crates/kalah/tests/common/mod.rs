//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::sync::mpsc::Receiver;

use kalah::protocol::{ClientMessage, ServerMessage, StateMessage};
use kalah::service::Service;
use kalah_core::{BoardState, Rules};
use serde::Deserialize;

pub const TRANSCRIPT: &str = include_str!("../fixtures/two_client_game.ndjson");

/// One line of a recorded transcript: which client sent what. The literal
/// `{session}` in a message stands for the id the server handed out.
#[derive(Debug, Deserialize)]
pub struct Step {
    pub from: String,
    pub msg: serde_json::Value,
}

pub fn load_transcript(text: &str) -> Vec<Step> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("transcript line"))
        .collect()
}

pub fn substitute(step: &Step, session_id: &str) -> ClientMessage {
    let text = step.msg.to_string().replace("{session}", session_id);
    serde_json::from_str(&text).expect("transcript message")
}

pub fn drain(rx: &Receiver<ServerMessage>) -> Vec<ServerMessage> {
    rx.try_iter().collect()
}

pub fn states(msgs: &[ServerMessage]) -> Vec<StateMessage> {
    msgs.iter()
        .filter_map(|m| match m {
            ServerMessage::State(s) => Some(s.clone()),
            _ => None,
        })
        .collect()
}

/// Everything each client received after each step of a replay.
#[derive(Debug, PartialEq)]
pub struct Replay {
    pub south: Vec<Vec<ServerMessage>>,
    pub north: Vec<Vec<ServerMessage>>,
}

/// Replays `steps` against a fresh in-process service.
pub fn replay(steps: &[Step]) -> Replay {
    let service = Service::default();
    let (mut south, south_rx) = service.connect();
    let (mut north, north_rx) = service.connect();
    let mut session_id = String::new();
    let mut out = Replay { south: Vec::new(), north: Vec::new() };
    for step in steps {
        let msg = substitute(step, &session_id);
        match step.from.as_str() {
            "south" => south.handle(msg),
            "north" => north.handle(msg),
            other => panic!("unknown client {other}"),
        }
        if session_id.is_empty() {
            session_id = south.session_id().unwrap_or_default().to_string();
        }
        out.south.push(drain(&south_rx));
        out.north.push(drain(&north_rx));
    }
    out
}

/// Checks a replay: from the join onward both clients see the same `state`
/// broadcasts at every step, and those boards follow the engine's own
/// replay of the accepted moves. Returns the number of broadcasts compared.
pub fn check_replay(steps: &[Step], replay: &Replay) -> Result<usize, String> {
    let joined = steps
        .iter()
        .position(|s| s.msg["type"] == "join")
        .ok_or("transcript has no join")?;
    let mut board = BoardState::initial();
    let mut compared = 0;
    for (i, step) in steps.iter().enumerate() {
        let a = states(&replay.south[i]);
        let b = states(&replay.north[i]);
        if i >= joined && a != b {
            return Err(format!("step {i}: south saw {a:?}, north saw {b:?}"));
        }
        for s in &a {
            let expected = match s.pit {
                Some(pit) => {
                    let out = board.apply_move_with(pit, &Rules::default()).map_err(|e| format!("step {i}: {e}"))?;
                    if (out.extra_turn, out.captured, out.terminal) != (s.extra_turn, s.captured, s.terminal) {
                        return Err(format!("step {i}: outcome flags differ for pit {pit}"));
                    }
                    out.state
                }
                None => board.clone(),
            };
            if s.board != expected.to_string() {
                return Err(format!("step {i} ({}): board {} but engine gives {expected}", step.msg, s.board));
            }
            board = expected;
            compared += 1;
        }
    }
    Ok(compared)
}
