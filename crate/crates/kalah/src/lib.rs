//! Std companion to `kalah-core`: benchmark harness, session service with
//! its wire protocol, and the interactive front end used by the `kalah`
//! binary.

pub mod bench;
pub mod cli;
pub mod play;
pub mod protocol;
pub mod service;
pub mod server;
