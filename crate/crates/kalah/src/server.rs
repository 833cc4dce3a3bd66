//! Network front ends for [`Service`].
//!
//! One listening port serves both transports. A connection whose first bytes
//! are `GET ` is treated as a WebSocket upgrade (one JSON message per text
//! frame); anything else speaks newline-delimited JSON.

use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{self, TryRecvError};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use tungstenite::Message;

use crate::protocol::ServerMessage;
use crate::service::Service;

/// How often a WebSocket connection checks for outbound messages while idle.
const WS_POLL: Duration = Duration::from_millis(20);

/// Binds `addr` and serves connections on a background thread.
pub fn spawn<A: ToSocketAddrs>(addr: A, service: Service) -> io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = TcpListener::bind(addr)?;
    let local = listener.local_addr()?;
    let handle = thread::spawn(move || serve(listener, service));
    Ok((local, handle))
}

/// Accepts connections forever, one thread per connection.
pub fn serve(listener: TcpListener, service: Service) {
    for stream in listener.incoming() {
        match stream {
            Ok(stream) => {
                let service = service.clone();
                thread::spawn(move || {
                    let peer = stream.peer_addr().ok();
                    if let Err(e) = handle_stream(stream, service) {
                        log::debug!("connection {peer:?} ended: {e}");
                    }
                });
            }
            Err(e) => log::warn!("accept failed: {e}"),
        }
    }
}

fn handle_stream(stream: TcpStream, service: Service) -> io::Result<()> {
    let mut head = [0u8; 4];
    // Wait for enough bytes to tell the transports apart.
    loop {
        let n = stream.peek(&mut head)?;
        if n == 0 || n == head.len() || head[0] != b'G' {
            break;
        }
        thread::sleep(Duration::from_millis(5));
    }
    if &head == b"GET " {
        serve_websocket(stream, service)
    } else {
        serve_lines(stream, service)
    }
}

fn serve_lines(stream: TcpStream, service: Service) -> io::Result<()> {
    let (mut conn, rx) = service.connect();
    let out = stream.try_clone()?;
    let writer = thread::spawn(move || -> io::Result<()> {
        let mut w = BufWriter::new(out);
        for msg in rx {
            serde_json::to_writer(&mut w, &msg)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        Ok(())
    });
    let reader = BufReader::new(stream);
    let mut result = Ok(());
    for line in reader.lines() {
        match line {
            Ok(line) if line.trim().is_empty() => {}
            Ok(line) => conn.handle_text(&line),
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    // Leaving the session drops the last sender, which ends the writer.
    drop(conn);
    let _ = writer.join();
    result
}

fn ws_error(e: tungstenite::Error) -> io::Error {
    match e {
        tungstenite::Error::Io(e) => e,
        other => io::Error::other(other),
    }
}

fn serve_websocket(stream: TcpStream, service: Service) -> io::Result<()> {
    let mut ws = tungstenite::accept(stream).map_err(|e| io::Error::other(e.to_string()))?;
    ws.get_ref().set_read_timeout(Some(WS_POLL))?;
    let (mut conn, rx) = service.connect();
    loop {
        loop {
            match rx.try_recv() {
                Ok(msg) => {
                    let text = serde_json::to_string(&msg).map_err(io::Error::other)?;
                    ws.send(Message::text(text)).map_err(ws_error)?;
                }
                Err(TryRecvError::Empty) => break,
                Err(TryRecvError::Disconnected) => return Ok(()),
            }
        }
        match ws.read() {
            Ok(Message::Text(text)) => conn.handle_text(text.as_str()),
            Ok(Message::Close(_)) => return Ok(()),
            Ok(_) => {}
            Err(tungstenite::Error::Io(e))
                if matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut) => {}
            Err(tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed) => return Ok(()),
            Err(e) => return Err(ws_error(e)),
        }
    }
}

/// Line-protocol client. Inbound messages are read on a background thread
/// and handed over in order through [`Client::events`].
pub struct Client {
    writer: BufWriter<TcpStream>,
    events: mpsc::Receiver<ServerMessage>,
}

impl Client {
    pub fn connect<A: ToSocketAddrs>(addr: A) -> io::Result<Client> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        let inbound = BufReader::new(stream.try_clone()?);
        let (tx, events) = mpsc::channel();
        thread::spawn(move || {
            for line in inbound.lines() {
                let Ok(line) = line else { break };
                match serde_json::from_str::<ServerMessage>(&line) {
                    Ok(msg) => {
                        if tx.send(msg).is_err() {
                            break;
                        }
                    }
                    Err(e) => {
                        log::warn!("ignoring malformed server message {line:?}: {e}");
                    }
                }
            }
        });
        Ok(Client { writer: BufWriter::new(stream), events })
    }

    pub fn send(&mut self, msg: &crate::protocol::ClientMessage) -> io::Result<()> {
        serde_json::to_writer(&mut self.writer, msg)?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()
    }

    /// Blocks for the next message; `None` once the server has gone away.
    pub fn recv(&self) -> Option<ServerMessage> {
        self.events.recv().ok()
    }

    pub fn recv_timeout(&self, timeout: Duration) -> Option<ServerMessage> {
        self.events.recv_timeout(timeout).ok()
    }

    pub fn events(&self) -> &mpsc::Receiver<ServerMessage> {
        &self.events
    }
}
