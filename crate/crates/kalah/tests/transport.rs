use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::time::Duration;

use kalah::protocol::{ClientMessage, ErrorCode, Mode, ServerMessage, WireSeat};
use kalah::server;
use kalah::service::Service;
use kalah_core::BoardState;
use tungstenite::Message;

fn start() -> std::net::SocketAddr {
    server::spawn("127.0.0.1:0", Service::default()).unwrap().0
}

#[test]
fn line_transport_plays_hvc() {
    let addr = start();
    let stream = TcpStream::connect(addr).unwrap();
    stream.set_read_timeout(Some(Duration::from_secs(10))).unwrap();
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut writer = stream;
    let mut next = || {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        serde_json::from_str::<ServerMessage>(&line).unwrap()
    };

    writer.write_all(b"{\"type\":\"create\",\"mode\":\"hvc\",\"level\":1}\n").unwrap();
    assert!(matches!(next(), ServerMessage::Created { seat: Some(WireSeat::South), .. }));
    let ServerMessage::State(start) = next() else { panic!() };
    assert_eq!(start.board, BoardState::initial().to_string());

    // Pit 2 ends in a North pit, so the computer answers with at least one move.
    writer.write_all(b"{\"type\":\"move\",\"pit\":2}\n").unwrap();
    let ServerMessage::State(mine) = next() else { panic!() };
    assert_eq!(mine.board, "6,6,0,7,7,7/1/7,7,6,6,6,6/0 N");
    let ServerMessage::State(reply) = next() else { panic!() };
    assert!(reply.pit.is_some());

    writer.write_all(b"not json\n").unwrap();
    assert!(matches!(next(), ServerMessage::Error { code: ErrorCode::BadRequest, .. }));
}

#[test]
fn websocket_transport_plays_cvc() {
    let addr = start();
    let (mut ws, _) = tungstenite::connect(format!("ws://{addr}/")).unwrap();
    let create = ClientMessage::Create { mode: Mode::Cvc, level: Some(1), config: None };
    ws.send(Message::text(serde_json::to_string(&create).unwrap())).unwrap();
    let mut terminal = false;
    let mut count = 0;
    while !terminal {
        let Message::Text(text) = ws.read().unwrap() else { continue };
        let msg: ServerMessage = serde_json::from_str(text.as_str()).unwrap();
        if let ServerMessage::State(s) = msg {
            count += 1;
            terminal = s.terminal;
        }
    }
    assert!(count > 10);
    ws.close(None).unwrap();
}

#[test]
fn websocket_and_line_clients_share_a_session() {
    let addr = start();
    let mut host = server::Client::connect(addr).unwrap();
    host.send(&ClientMessage::Create { mode: Mode::HvhNet, level: None, config: None }).unwrap();
    let Some(ServerMessage::Created { session_id, .. }) = host.recv() else { panic!() };

    let (mut ws, _) = tungstenite::connect(format!("ws://{addr}/")).unwrap();
    let join = ClientMessage::Join { session_id };
    ws.send(Message::text(serde_json::to_string(&join).unwrap())).unwrap();
    let mut read_ws = || loop {
        if let Message::Text(text) = ws.read().unwrap() {
            return serde_json::from_str::<ServerMessage>(text.as_str()).unwrap();
        }
    };
    assert_eq!(read_ws(), ServerMessage::Joined { seat: WireSeat::North });
    let ServerMessage::State(ws_state) = read_ws() else { panic!() };
    let Some(ServerMessage::State(host_state)) = host.recv_timeout(Duration::from_secs(5)) else { panic!() };
    assert_eq!(ws_state, host_state);

    host.send(&ClientMessage::Move { pit: 5 }).unwrap();
    let Some(ServerMessage::State(a)) = host.recv_timeout(Duration::from_secs(5)) else { panic!() };
    let ServerMessage::State(b) = read_ws() else { panic!() };
    assert_eq!(a, b);
    assert_eq!(a.board, "6,6,6,6,6,0/1/7,7,7,7,7,6/0 N");
}
