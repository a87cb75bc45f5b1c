//! Block feature acquisition over a node's JSON-RPC interface.
//!
//! For each height the client calls `getblockhash` and then `getblock` with
//! verbosity 2 (transactions decoded inline), and reduces the result with
//! [`extract_tx_features`] and [`aggregate_block`].

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::features::{aggregate_block, extract_tx_features, BlockFeatures};

pub const ENV_RPC_URL: &str = "JOIST_RPC_URL";
pub const ENV_RPC_USER: &str = "JOIST_RPC_USER";
pub const ENV_RPC_PASS: &str = "JOIST_RPC_PASS";

/// Verbosity level of `getblock` that inlines decoded transactions.
const DECODED_TX_VERBOSITY: u8 = 2;

// Node error codes for an out-of-range height and an unknown block.
const RPC_INVALID_PARAMETER: i64 = -8;
const RPC_INVALID_ADDRESS_OR_KEY: i64 = -5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Credentials {
    pub username: String,
    pub password: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RpcEndpoint {
    pub url: String,
    pub credentials: Option<Credentials>,
    pub timeout: Duration,
    pub max_parallel: usize,
}

impl RpcEndpoint {
    pub fn new(url: impl Into<String>) -> Self {
        RpcEndpoint {
            url: url.into(),
            credentials: None,
            timeout: Duration::from_secs(30),
            max_parallel: 4,
        }
    }

    pub fn with_credentials(
        mut self,
        username: impl Into<String>,
        password: impl Into<String>,
    ) -> Self {
        self.credentials = Some(Credentials {
            username: username.into(),
            password: password.into(),
        });
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_max_parallel(mut self, max_parallel: usize) -> Self {
        self.max_parallel = max_parallel;
        self
    }

    /// Reads `JOIST_RPC_URL`, and optionally `JOIST_RPC_USER` / `JOIST_RPC_PASS`.
    pub fn from_env() -> Result<Self> {
        let url = std::env::var(ENV_RPC_URL)
            .map_err(|_| Error::InvalidArgument(format!("{ENV_RPC_URL} is not set")))?;
        let mut endpoint = RpcEndpoint::new(url);
        if let Ok(user) = std::env::var(ENV_RPC_USER) {
            endpoint =
                endpoint.with_credentials(user, std::env::var(ENV_RPC_PASS).unwrap_or_default());
        }
        Ok(endpoint)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_parallel == 0 {
            return Err(Error::InvalidArgument(
                "max_parallel must be at least 1".into(),
            ));
        }
        if self.timeout.is_zero() {
            return Err(Error::InvalidArgument("timeout must be positive".into()));
        }
        Ok(())
    }
}

/// Something that can execute a JSON-RPC call and return its `result`.
pub trait RpcTransport: Sync {
    fn call(&self, method: &str, params: Value) -> Result<Value>;

    /// Endpoint description used in error messages.
    fn endpoint(&self) -> &str;
}

/// JSON-RPC 1.0 over HTTP POST with optional basic authentication.
pub struct HttpTransport {
    client: reqwest::blocking::Client,
    url: String,
    credentials: Option<Credentials>,
    next_id: AtomicUsize,
}

impl HttpTransport {
    pub fn new(endpoint: &RpcEndpoint) -> Result<Self> {
        endpoint.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(endpoint.timeout)
            .build()
            .map_err(|e| Error::Connection {
                endpoint: endpoint.url.clone(),
                message: e.to_string(),
            })?;
        Ok(HttpTransport {
            client,
            url: endpoint.url.clone(),
            credentials: endpoint.credentials.clone(),
            next_id: AtomicUsize::new(0),
        })
    }

    fn connection_error(&self, message: impl Into<String>) -> Error {
        Error::Connection {
            endpoint: self.url.clone(),
            message: message.into(),
        }
    }
}

impl RpcTransport for HttpTransport {
    fn call(&self, method: &str, params: Value) -> Result<Value> {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let envelope = json!({"jsonrpc": "1.0", "id": id, "method": method, "params": params});
        let mut request = self.client.post(&self.url).json(&envelope);
        if let Some(c) = &self.credentials {
            request = request.basic_auth(&c.username, Some(&c.password));
        }
        let response = request
            .send()
            .map_err(|e| self.connection_error(e.to_string()))?;
        let status = response.status();
        if status == reqwest::StatusCode::UNAUTHORIZED || status == reqwest::StatusCode::FORBIDDEN {
            return Err(
                self.connection_error(format!("authentication failed (HTTP {})", status.as_u16()))
            );
        }
        let body = response
            .text()
            .map_err(|e| self.connection_error(e.to_string()))?;
        let reply: Value = serde_json::from_str(&body).map_err(|_| {
            self.connection_error(format!(
                "HTTP {} with non-JSON body for `{method}`",
                status.as_u16()
            ))
        })?;
        decode_reply(reply, method, &self.url)
    }

    fn endpoint(&self) -> &str {
        &self.url
    }
}

/// Extracts `result` from a JSON-RPC reply, mapping node errors.
pub fn decode_reply(reply: Value, method: &str, endpoint: &str) -> Result<Value> {
    match reply.get("error") {
        None | Some(Value::Null) => {}
        Some(err) => {
            let code = err.get("code").and_then(Value::as_i64).unwrap_or(0);
            let message = err
                .get("message")
                .and_then(Value::as_str)
                .unwrap_or("unknown error")
                .to_string();
            return Err(match code {
                RPC_INVALID_PARAMETER | RPC_INVALID_ADDRESS_OR_KEY => {
                    Error::Range(format!("`{method}` failed: {message} (code {code})"))
                }
                _ => Error::Connection {
                    endpoint: endpoint.to_string(),
                    message: format!("`{method}` failed: {message} (code {code})"),
                },
            });
        }
    }
    reply
        .get("result")
        .cloned()
        .ok_or_else(|| Error::parse("result").with_context(format!("reply to `{method}`")))
}

/// Reduces a `getblock` verbosity-2 record to block features.
pub fn block_features_from_record(height: u64, block: &Value) -> Result<BlockFeatures> {
    let ctx = || format!("height {height}");
    let size = block
        .get("size")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("size").with_context(ctx()))?;
    let txs = block
        .get("tx")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("tx").with_context(ctx()))?;
    let features = txs
        .iter()
        .map(|tx| extract_tx_features(tx).map_err(|e| e.with_context(ctx())))
        .collect::<Result<Vec<_>>>()?;
    aggregate_block(&features, height, size)
}

fn fetch_one(transport: &dyn RpcTransport, height: u64) -> Result<BlockFeatures> {
    let hash = transport.call("getblockhash", json!([height]))?;
    let hash = hash.as_str().ok_or_else(|| {
        Error::parse("getblockhash result").with_context(format!("height {height}"))
    })?;
    let block = transport.call("getblock", json!([hash, DECODED_TX_VERBOSITY]))?;
    if let Some(reported) = block.get("height").and_then(Value::as_u64) {
        if reported != height {
            return Err(Error::parse("height")
                .with_context(format!("requested {height}, node returned {reported}")));
        }
    }
    block_features_from_record(height, &block)
}

/// Fetches one [`BlockFeatures`] per height of `heights`, in ascending
/// order, with at most `max_parallel` requests in flight.
pub fn fetch_with_transport(
    transport: &dyn RpcTransport,
    heights: RangeInclusive<u64>,
    max_parallel: usize,
) -> Result<Vec<BlockFeatures>> {
    let (lo, hi) = (*heights.start(), *heights.end());
    if lo > hi {
        return Err(Error::Range(format!("empty height range [{lo}, {hi}]")));
    }
    if max_parallel == 0 {
        return Err(Error::InvalidArgument(
            "max_parallel must be at least 1".into(),
        ));
    }
    let count =
        usize::try_from(hi - lo + 1).map_err(|_| Error::Range("height range too large".into()))?;
    let workers = max_parallel.min(count);

    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let slots: Mutex<Vec<Option<Result<BlockFeatures>>>> =
        Mutex::new((0..count).map(|_| None).collect());

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if failed.load(Ordering::Relaxed) {
                    break;
                }
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= count {
                    break;
                }
                let result = fetch_one(transport, lo + idx as u64);
                if result.is_err() {
                    failed.store(true, Ordering::Relaxed);
                }
                slots.lock().expect("result slots poisoned")[idx] = Some(result);
            });
        }
    });

    let slots = slots.into_inner().expect("result slots poisoned");
    if failed.load(Ordering::Relaxed) {
        let err = slots
            .into_iter()
            .flatten()
            .find_map(|r| r.err())
            .expect("a failure was recorded");
        return Err(err);
    }
    slots
        .into_iter()
        .map(|r| r.expect("every height fetched"))
        .collect()
}

/// Fetches block features for `heights` from the node at `endpoint`.
pub fn fetch_block_features(
    endpoint: &RpcEndpoint,
    heights: RangeInclusive<u64>,
) -> Result<Vec<BlockFeatures>> {
    let transport = HttpTransport::new(endpoint)?;
    log::info!(
        "fetching heights {}..={} from {}",
        heights.start(),
        heights.end(),
        endpoint.url
    );
    fetch_with_transport(&transport, heights, endpoint.max_parallel)
}
