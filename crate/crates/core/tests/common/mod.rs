#![allow(dead_code)]

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread;

use serde_json::{json, Value};

/// Minimal JSON-RPC node over HTTP/1.1 serving a fixed chain.
pub struct MockNode {
    pub url: String,
    pub requests: Arc<Mutex<Vec<Value>>>,
}

pub struct MockChain {
    pub blocks: HashMap<u64, Value>,
    /// Expected `Authorization` header value, if any.
    pub auth: Option<String>,
}

impl MockNode {
    pub fn start(chain: MockChain) -> MockNode {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/", listener.local_addr().unwrap());
        let requests = Arc::new(Mutex::new(Vec::new()));
        let chain = Arc::new(chain);
        let log = requests.clone();
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(stream) = stream else { continue };
                let chain = chain.clone();
                let log = log.clone();
                thread::spawn(move || {
                    let _ = serve(stream, &chain, &log);
                });
            }
        });
        MockNode { url, requests }
    }
}

fn serve(stream: TcpStream, chain: &MockChain, log: &Mutex<Vec<Value>>) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut out = stream;
    loop {
        let mut request_line = String::new();
        if reader.read_line(&mut request_line)? == 0 {
            return Ok(());
        }
        let mut headers = HashMap::new();
        loop {
            let mut line = String::new();
            reader.read_line(&mut line)?;
            let line = line.trim_end();
            if line.is_empty() {
                break;
            }
            if let Some((k, v)) = line.split_once(':') {
                headers.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
            }
        }
        let len: usize = headers
            .get("content-length")
            .and_then(|v| v.parse().ok())
            .unwrap_or(0);
        let mut body = vec![0; len];
        reader.read_exact(&mut body)?;

        if let Some(expected) = &chain.auth {
            if headers.get("authorization") != Some(expected) {
                write!(
                    out,
                    "HTTP/1.1 401 Unauthorized\r\nContent-Length: 0\r\n\r\n"
                )?;
                out.flush()?;
                continue;
            }
        }

        let request: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
        log.lock().unwrap().push(request.clone());
        let (status, reply) = answer(&request, chain);
        let text = reply.to_string();
        write!(
            out,
            "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{text}",
            text.len()
        )?;
        out.flush()?;
    }
}

fn answer(request: &Value, chain: &MockChain) -> (&'static str, Value) {
    let id = request["id"].clone();
    let params = &request["params"];
    let fail = |code: i64, message: &str| {
        (
            "500 Internal Server Error",
            json!({"result": null, "error": {"code": code, "message": message}, "id": id}),
        )
    };
    match request["method"].as_str() {
        Some("getblockhash") => {
            let h = params[0].as_u64().unwrap_or(u64::MAX);
            if chain.blocks.contains_key(&h) {
                (
                    "200 OK",
                    json!({"result": format!("{h:064x}"), "error": null, "id": id}),
                )
            } else {
                fail(-8, "Block height out of range")
            }
        }
        Some("getblock") => {
            let h = params[0]
                .as_str()
                .and_then(|s| u64::from_str_radix(s, 16).ok());
            match h.and_then(|h| chain.blocks.get(&h)) {
                Some(block) if params[1] == json!(2) => {
                    ("200 OK", json!({"result": block, "error": null, "id": id}))
                }
                Some(_) => fail(-8, "verbosity must be 2 for this mock"),
                None => fail(-5, "Block not found"),
            }
        }
        _ => fail(-32601, "Method not found"),
    }
}

/// A block record as returned by `getblock` with verbosity 2.
pub fn block_record(height: u64, size: u64, txs: Vec<Value>) -> Value {
    json!({"hash": format!("{height:064x}"), "height": height, "size": size, "tx": txs})
}

pub fn coinbase_tx() -> Value {
    json!({"txid": "cb", "vin": [{"coinbase": "03a1b2c3", "sequence": 4294967295u32}], "vout": [{"value": 3.125}]})
}

pub fn shielded_tx(
    inputs: usize,
    outputs: usize,
    spends: usize,
    shielded_outputs: usize,
    joinsplits: usize,
) -> Value {
    json!({
        "txid": "aa",
        "vin": (0..inputs).map(|i| json!({"txid": format!("{i:064x}"), "vout": 0, "scriptSig": {"hex": ""}})).collect::<Vec<_>>(),
        "vout": (0..outputs).map(|_| json!({"value": 1.0})).collect::<Vec<_>>(),
        "vShieldedSpend": (0..spends).map(|_| json!({"cv": "00"})).collect::<Vec<_>>(),
        "vShieldedOutput": (0..shielded_outputs).map(|_| json!({"cv": "00"})).collect::<Vec<_>>(),
        "vjoinsplit": (0..joinsplits).map(|_| json!({"vpub_old": 0.0})).collect::<Vec<_>>(),
    })
}

/// `Authorization` header value for HTTP basic auth.
pub fn basic_auth(user: &str, pass: &str) -> String {
    use base64::Engine;
    format!(
        "Basic {}",
        base64::engine::general_purpose::STANDARD.encode(format!("{user}:{pass}"))
    )
}
