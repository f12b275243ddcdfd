//! A deterministic local fixture server: static files over plain HTTP, with
//! an access log tests can assert navigation counts against.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use thiserror::Error;
use url::Url;

/// What a route serves.
#[derive(Debug, Clone, PartialEq)]
pub enum RouteTarget {
    /// A file path relative to the site root.
    File(PathBuf),
    /// An HTTP 302 to the given location.
    Redirect(String),
}

/// A static site: root directory, explicit route table, and listen address.
#[derive(Debug, Clone)]
pub struct FixtureSite {
    pub root: PathBuf,
    pub routes: Vec<(String, RouteTarget)>,
    pub listen: SocketAddr,
}

impl FixtureSite {
    /// A site listening on an ephemeral localhost port with no routes yet.
    pub fn new(root: impl Into<PathBuf>) -> FixtureSite {
        FixtureSite {
            root: root.into(),
            routes: Vec::new(),
            listen: "127.0.0.1:0".parse().expect("literal address"),
        }
    }

    pub fn route(mut self, path: &str, file: impl Into<PathBuf>) -> FixtureSite {
        self.routes.push((path.to_owned(), RouteTarget::File(file.into())));
        self
    }

    pub fn redirect(mut self, path: &str, to: &str) -> FixtureSite {
        self.routes.push((path.to_owned(), RouteTarget::Redirect(to.to_owned())));
        self
    }
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("address {addr} in use")]
    AddressInUse { addr: SocketAddr },
    #[error("cannot serve: {0}")]
    Io(#[from] std::io::Error),
}

/// A running fixture server. Shuts down on drop; `shutdown` is idempotent.
pub struct FixtureServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    log: Arc<Mutex<Vec<String>>>,
    handle: Option<JoinHandle<()>>,
}

/// Loads every routed file into memory and serves the site on its listen
/// address. Responses carry stable ETags derived from content.
pub fn serve_fixture(site: &FixtureSite) -> Result<FixtureServer, ServeError> {
    let listener = TcpListener::bind(site.listen).map_err(|e| {
        if e.kind() == std::io::ErrorKind::AddrInUse {
            ServeError::AddressInUse { addr: site.listen }
        } else {
            ServeError::Io(e)
        }
    })?;
    let addr = listener.local_addr()?;

    let mut routes: Vec<(String, Response)> = Vec::with_capacity(site.routes.len());
    for (path, target) in &site.routes {
        let response = match target {
            RouteTarget::File(rel) => {
                let body = std::fs::read(site.root.join(rel))?;
                Response::Content(body)
            }
            RouteTarget::Redirect(to) => Response::Redirect(to.clone()),
        };
        routes.push((path.clone(), response));
    }

    let stop = Arc::new(AtomicBool::new(false));
    let log = Arc::new(Mutex::new(Vec::new()));
    let routes = Arc::new(routes);

    let handle = {
        let stop = Arc::clone(&stop);
        let log = Arc::clone(&log);
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let routes = Arc::clone(&routes);
                let log = Arc::clone(&log);
                std::thread::spawn(move || {
                    let _ = handle_connection(stream, &routes, &log);
                });
            }
        })
    };

    Ok(FixtureServer {
        addr,
        stop,
        log,
        handle: Some(handle),
    })
}

#[derive(Clone)]
enum Response {
    Content(Vec<u8>),
    Redirect(String),
}

impl FixtureServer {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> Url {
        Url::parse(&format!("http://{}/", self.addr)).expect("listen address is a valid URL host")
    }

    pub fn url(&self, path: &str) -> Url {
        self.base_url().join(path).expect("fixture paths are valid")
    }

    /// Request paths served so far, in arrival order.
    pub fn access_log(&self) -> Vec<String> {
        self.log.lock().expect("access log lock").clone()
    }

    pub fn request_count(&self) -> usize {
        self.log.lock().expect("access log lock").len()
    }

    pub fn clear_log(&self) {
        self.log.lock().expect("access log lock").clear();
    }

    /// Stops accepting connections. Safe to call repeatedly.
    pub fn shutdown(&mut self) {
        if self.stop.swap(true, Ordering::SeqCst) {
            return;
        }
        // Poke the listener so the accept loop observes the flag.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        self.shutdown();
    }
}

fn handle_connection(
    mut stream: TcpStream,
    routes: &[(String, Response)],
    log: &Mutex<Vec<String>>,
) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_owned();
    let raw_path = parts.next().unwrap_or_default().to_owned();

    // Drain headers; the fixture server ignores them.
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 || line == "\r\n" || line == "\n" {
            break;
        }
    }

    let path = raw_path.split(['?', '#']).next().unwrap_or("").to_owned();
    log.lock().expect("access log lock").push(path.clone());

    if method != "GET" && method != "HEAD" {
        return write_simple(&mut stream, 405, "method not allowed");
    }

    match routes.iter().find(|(p, _)| *p == path) {
        Some((_, Response::Content(body))) => {
            let etag = content_etag(body);
            let header = format!(
                "HTTP/1.1 200 OK\r\nContent-Type: text/html; charset=utf-8\r\nContent-Length: {}\r\nETag: \"{}\"\r\nConnection: close\r\n\r\n",
                body.len(),
                etag
            );
            stream.write_all(header.as_bytes())?;
            if method == "GET" {
                stream.write_all(body)?;
            }
            Ok(())
        }
        Some((_, Response::Redirect(to))) => {
            let header = format!(
                "HTTP/1.1 302 Found\r\nLocation: {}\r\nContent-Length: 0\r\nConnection: close\r\n\r\n",
                to
            );
            stream.write_all(header.as_bytes())
        }
        None => write_simple(&mut stream, 404, "not found"),
    }
}

fn write_simple(stream: &mut TcpStream, status: u16, reason: &str) -> std::io::Result<()> {
    let body = format!("{} {}", status, reason);
    let header = format!(
        "HTTP/1.1 {} {}\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        status,
        reason,
        body.len(),
        body
    );
    stream.write_all(header.as_bytes())
}

fn content_etag(body: &[u8]) -> String {
    let mut hasher = DefaultHasher::new();
    body.hash(&mut hasher);
    format!("{:016x}", hasher.finish())
}
