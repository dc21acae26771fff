use std::io::Read;
use std::net::SocketAddr;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use serde_json::json;
use tiny_http::{Header, Request, Server};

use crate::api::{handle, Response};

/// Longest a request may run before the client gets a 504.
pub const REQUEST_TIMEOUT: Duration = Duration::from_secs(10);

// Bodies above this size are refused with 413.
const MAX_BODY: u64 = 8 << 20;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
    /// Value of `Access-Control-Allow-Origin`.
    pub allow_origin: String,
    pub timeout: Duration,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            host: "127.0.0.1".into(),
            port: 8080,
            allow_origin: "*".into(),
            timeout: REQUEST_TIMEOUT,
        }
    }
}

/// Serves requests until the process exits, one thread per request.
pub fn serve(cfg: &ServerConfig) -> std::io::Result<()> {
    let server = bind(cfg)?;
    eprintln!("listening on http://{}", server.server_addr());
    run(server, cfg.clone());
    Ok(())
}

/// Binds and serves on a background thread; returns the bound address.
/// Port 0 picks a free port.
pub fn spawn(cfg: &ServerConfig) -> std::io::Result<SocketAddr> {
    let server = bind(cfg)?;
    let addr = server
        .server_addr()
        .to_ip()
        .ok_or_else(|| std::io::Error::other("not an IP listener"))?;
    let cfg = cfg.clone();
    thread::spawn(move || run(server, cfg));
    Ok(addr)
}

fn bind(cfg: &ServerConfig) -> std::io::Result<Server> {
    Server::http((cfg.host.as_str(), cfg.port)).map_err(std::io::Error::other)
}

fn run(server: Server, cfg: ServerConfig) {
    for request in server.incoming_requests() {
        let cfg = cfg.clone();
        thread::spawn(move || respond(request, &cfg));
    }
}

fn respond(mut request: Request, cfg: &ServerConfig) {
    let method = request.method().to_string().to_ascii_uppercase();
    let url = request.url().to_string();
    let mut body = Vec::new();
    let read = request
        .as_reader()
        .take(MAX_BODY + 1)
        .read_to_end(&mut body);
    let response = match read {
        Err(e) => error_response(400, format!("could not read body: {e}")),
        Ok(n) if n as u64 > MAX_BODY => error_response(413, "request body too large".into()),
        Ok(_) => run_with_timeout(method, url, body, cfg.timeout),
    };
    let mut out = tiny_http::Response::from_string(if response.status == 204 {
        String::new()
    } else {
        response.body.to_string()
    })
    .with_status_code(response.status);
    let headers = [
        ("Content-Type", "application/json"),
        ("Access-Control-Allow-Origin", cfg.allow_origin.as_str()),
        ("Access-Control-Allow-Methods", "GET, POST, OPTIONS"),
        ("Access-Control-Allow-Headers", "Content-Type"),
    ];
    for (k, v) in headers {
        if let Ok(h) = Header::from_bytes(k, v) {
            out.add_header(h);
        }
    }
    let _ = request.respond(out);
}

fn run_with_timeout(method: String, url: String, body: Vec<u8>, timeout: Duration) -> Response {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(handle(&method, &url, &body));
    });
    match rx.recv_timeout(timeout) {
        Ok(r) => r,
        Err(mpsc::RecvTimeoutError::Timeout) => {
            error_response(504, format!("request exceeded {timeout:?}"))
        }
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            error_response(500, "request handler panicked".into())
        }
    }
}

fn error_response(status: u16, error: String) -> Response {
    Response {
        status,
        body: json!({ "ok": false, "result": null, "diagnostic": null, "error": error, "elapsed_ms": 0.0 }),
    }
}
