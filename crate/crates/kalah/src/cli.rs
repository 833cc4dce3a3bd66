//! Command-line interface: argument definitions and the subcommand drivers.
//!
//! Everything here takes its input and output streams as parameters so the
//! binary is a thin wrapper and tests can drive a full session in memory.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kalah_core::{
    full_tree_nodes, Algorithm, BoardState, LevelError, ParseBoardError, Rules, SearchParams, Searcher, Seat,
    DEFAULT_COEFFICIENT, MAX_COEFFICIENT,
};

use crate::bench::{run_bench, BenchConfig, BenchError, BASELINE_BRANCHING};
use crate::play::{describe_result, play_network, LocalGame, NetPlayError, Participant};
use crate::protocol::{ClientMessage, Mode, ServerMessage};
use crate::server::{self, Client};
use crate::service::{Service, ServiceSettings};

#[derive(Debug, Parser)]
#[command(name = "kalah", version, about = "Play, analyse and benchmark Kalah")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play a game locally or over the network.
    Play(PlayArgs),
    /// Search one position with both algorithms and compare node counts.
    Analyze(AnalyzeArgs),
    /// Measure node counts on random positions and write CSV.
    Bench(BenchArgs),
    /// Run the game server.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlayMode {
    /// Two humans at this terminal.
    Hvh,
    /// You (South) against the computer (North).
    Hvc,
    /// Computer against computer.
    Cvc,
    /// Host a two-player network game and play South.
    NetHost,
    /// Join a hosted network game.
    NetJoin,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long, value_enum)]
    pub mode: PlayMode,
    /// Computer difficulty; search depth is level times coefficient.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub level: Option<u8>,
    #[arg(long, default_value_t = DEFAULT_COEFFICIENT)]
    pub coefficient: u32,
    /// Starting board, e.g. "6,6,6,6,6,6/0/6,6,6,6,6,6/0 S".
    #[arg(long)]
    pub position: Option<String>,
    /// Address to listen on when hosting.
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub listen: String,
    /// Server address when joining.
    #[arg(long)]
    pub connect: Option<String>,
    /// Session id printed by the host.
    #[arg(long)]
    pub session: Option<String>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("horizon").required(true).args(["depth", "level"]))]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub position: Option<String>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub level: Option<u8>,
    #[arg(long, default_value_t = DEFAULT_COEFFICIENT)]
    pub coefficient: u32,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    pub depths: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random moves played from the start per sample, `A..B` (inclusive) or `N`.
    #[arg(long, default_value = "0..12", value_parser = parse_range)]
    pub playout_moves: RangeInclusive<u32>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub listen: String,
    #[arg(long, default_value_t = DEFAULT_COEFFICIENT)]
    pub coefficient: u32,
    /// Seconds a disconnected network player has to rejoin.
    #[arg(long, default_value_t = 30)]
    pub grace_secs: u64,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("`{s}` is not a move count"));
    match text.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(text)?;
            Ok(n..=n)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid position: {0}")]
    Position(#[from] ParseBoardError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error("--level is required when the computer plays")]
    MissingLevel,
    #[error("--mode net-join needs --connect and --session")]
    MissingJoinTarget,
    #[error("network games start from the standard board; --position is not supported")]
    NetworkPosition,
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("could not listen on {addr}: {source}")]
    Listen { addr: String, source: io::Error },
    #[error("could not connect to {addr}: {source}")]
    Connect { addr: String, source: io::Error },
    #[error("server refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Network(#[from] NetPlayError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn run<R: BufRead, W: Write>(cli: Cli, input: R, out: W) -> Result<(), CliError> {
    match cli.command {
        Command::Play(args) => play(args, input, out),
        Command::Analyze(args) => analyze(args, out),
        Command::Bench(args) => bench(args, out),
        Command::Serve(args) => serve(args, out),
    }
}

fn start_position(text: Option<&str>) -> Result<BoardState, CliError> {
    Ok(match text {
        Some(text) => text.parse()?,
        None => BoardState::initial(),
    })
}

fn play<R: BufRead, W: Write>(args: PlayArgs, input: R, mut out: W) -> Result<(), CliError> {
    let computer = |level: Option<u8>| -> Result<Participant, CliError> {
        let level = level.ok_or(CliError::MissingLevel)?;
        SearchParams::for_level(level, args.coefficient)?;
        Ok(Participant::Computer { level })
    };
    let (south, north) = match args.mode {
        PlayMode::Hvh => (Participant::Human, Participant::Human),
        PlayMode::Hvc => (Participant::Human, computer(args.level)?),
        PlayMode::Cvc => (computer(args.level)?, computer(args.level)?),
        PlayMode::NetHost | PlayMode::NetJoin => {
            if args.position.is_some() {
                return Err(CliError::NetworkPosition);
            }
            return play_remote(args, input, out);
        }
    };
    if let Some(level) = args.level {
        SearchParams::for_level(level, args.coefficient)?;
    }
    let start = start_position(args.position.as_deref())?;
    let mut game = LocalGame::new(start, Rules::default(), south, north, args.coefficient);
    game.run(input, &mut out)?;
    Ok(())
}

fn play_remote<R: BufRead, W: Write>(args: PlayArgs, input: R, mut out: W) -> Result<(), CliError> {
    let (addr, hello) = match args.mode {
        PlayMode::NetHost => {
            let settings = ServiceSettings { coefficient: args.coefficient, ..ServiceSettings::default() };
            SearchParams::for_level(1, settings.coefficient)?;
            let (bound, _server) = server::spawn(args.listen.as_str(), Service::new(settings))
                .map_err(|source| CliError::Listen { addr: args.listen.clone(), source })?;
            writeln!(out, "hosting on {bound}")?;
            (bound.to_string(), ClientMessage::Create { mode: Mode::HvhNet, level: args.level, config: None })
        }
        _ => {
            let (Some(addr), Some(session_id)) = (args.connect.clone(), args.session.clone()) else {
                return Err(CliError::MissingJoinTarget);
            };
            (addr, ClientMessage::Join { session_id })
        }
    };
    let mut client = Client::connect(addr.as_str()).map_err(|source| CliError::Connect { addr: addr.clone(), source })?;
    client.send(&hello)?;
    let seat = loop {
        match client.recv() {
            Some(ServerMessage::Created { session_id, seat }) => {
                writeln!(out, "session {session_id}")?;
                writeln!(out, "share: kalah play --mode net-join --connect {addr} --session {session_id}")?;
                writeln!(out, "waiting for an opponent...")?;
                out.flush()?;
                break seat.map(Seat::from).unwrap_or(Seat::South);
            }
            Some(ServerMessage::Joined { seat }) => break Seat::from(seat),
            Some(ServerMessage::Error { message, .. }) => return Err(CliError::Refused(message)),
            Some(_) => {}
            None => return Err(NetPlayError::Closed.into()),
        }
    };
    writeln!(out, "you play {seat}")?;
    let last = play_network(&mut client, seat, input, &mut out)?;
    log::debug!("network game left at {last}");
    Ok(())
}

fn analyze<W: Write>(args: AnalyzeArgs, mut out: W) -> Result<(), CliError> {
    let state = start_position(args.position.as_deref())?;
    let depth = match (args.depth, args.level) {
        (Some(depth), _) => depth,
        (None, Some(level)) => SearchParams::for_level(level, args.coefficient)?.depth,
        (None, None) => unreachable!("clap requires --depth or --level"),
    };
    writeln!(out, "position    {state}")?;
    if state.is_terminal() {
        let margin = state.kalah(Seat::South) as i64 - state.kalah(Seat::North) as i64;
        writeln!(out, "terminal    final margin {margin:+} for South; no best pit")?;
        writeln!(out, "{}", describe_result(&state))?;
        return Ok(());
    }
    let searcher = Searcher::new(Rules::default());
    let plain = searcher.search(&state, &SearchParams::with_depth(depth, Algorithm::Plain));
    let restricted = searcher.search(&state, &SearchParams::with_depth(depth, Algorithm::RestrictedAlphaBeta));
    let baseline = full_tree_nodes(depth, BASELINE_BRANCHING);
    let pit = |p: Option<usize>| p.map_or_else(|| "-".to_string(), |p| (p + 1).to_string());
    writeln!(out, "depth       {depth}")?;
    writeln!(out, "to move     {}", state.to_move())?;
    writeln!(out, "full tree   {baseline} nodes")?;
    for (name, r) in [("plain", &plain), ("restricted", &restricted)] {
        writeln!(
            out,
            "{name:<11} best pit {}, value {:+}, {} nodes",
            pit(r.best_pit),
            r.value,
            r.nodes_generated()
        )?;
    }
    let ratio = restricted.nodes_generated() as f64 / plain.nodes_generated() as f64;
    let of_full = restricted.nodes_generated() as f64 / baseline as f64;
    writeln!(out, "reduction   {:.2}% of plain, {:.2}% of full tree", ratio * 100.0, of_full * 100.0)?;
    Ok(())
}

fn bench<W: Write>(args: BenchArgs, out: W) -> Result<(), CliError> {
    let config = BenchConfig {
        depths: args.depths,
        samples: args.samples,
        rng_seed: args.seed,
        playout_moves: args.playout_moves,
    };
    let report = run_bench(&config)?;
    match args.out {
        Some(path) => {
            let write = |path: &PathBuf| -> io::Result<()> {
                let mut w = BufWriter::new(File::create(path)?);
                report.write_csv(&mut w)?;
                w.flush()
            };
            write(&path).map_err(|source| CliError::Output { path, source })?;
        }
        None => report.write_csv(out)?,
    }
    Ok(())
}

fn serve<W: Write>(args: ServeArgs, mut out: W) -> Result<(), CliError> {
    if !(1..=MAX_COEFFICIENT).contains(&args.coefficient) {
        return Err(LevelError::Coefficient(args.coefficient).into());
    }
    let settings = ServiceSettings {
        coefficient: args.coefficient,
        disconnect_grace: Duration::from_secs(args.grace_secs),
        ..ServiceSettings::default()
    };
    let (bound, handle) = server::spawn(args.listen.as_str(), Service::new(settings))
        .map_err(|source| CliError::Listen { addr: args.listen.clone(), source })?;
    writeln!(out, "listening on {bound} (line-delimited JSON and WebSocket)")?;
    out.flush()?;
    let _ = handle.join();
    Ok(())
}
