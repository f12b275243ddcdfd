//! A minimal in-process WebDriver endpoint for exercising the browser
//! backend hermetically. Serves the wire protocol (session create, navigate,
//! current url, page source, session delete) over a map of known pages.
//!
//! "Rendering" is simulated: when a page carries
//! `data-render-append="<markup>"` on a script tag, the markup is appended
//! before `</body>` in the source handed back, the way a script-built DOM
//! would differ from the raw transport bytes.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

pub struct MockWebDriver {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

struct State {
    pages: HashMap<String, String>,
    current_url: String,
    session_counter: u64,
}

impl MockWebDriver {
    pub fn start(pages: HashMap<String, String>) -> MockWebDriver {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock webdriver");
        let addr = listener.local_addr().expect("mock webdriver addr");
        let stop = Arc::new(AtomicBool::new(false));
        let state = Arc::new(Mutex::new(State {
            pages,
            current_url: String::new(),
            session_counter: 0,
        }));

        let handle = {
            let stop = Arc::clone(&stop);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let state = Arc::clone(&state);
                    std::thread::spawn(move || {
                        let _ = handle(stream, &state);
                    });
                }
            })
        };

        MockWebDriver {
            addr,
            stop,
            handle: Some(handle),
        }
    }

    pub fn endpoint(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn shutdown(&mut self) {
        if self.stop.swap(true, Ordering::SeqCst) {
            return;
        }
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for MockWebDriver {
    fn drop(&mut self) {
        self.shutdown();
    }
}

fn handle(mut stream: TcpStream, state: &Mutex<State>) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_owned();
    let path = parts.next().unwrap_or_default().to_owned();

    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 || line == "\r\n" || line == "\n" {
            break;
        }
        if let Some(rest) = line.to_ascii_lowercase().strip_prefix("content-length:") {
            content_length = rest.trim().parse().unwrap_or(0);
        }
    }
    let mut body = vec![0u8; content_length];
    if content_length > 0 {
        reader.read_exact(&mut body)?;
    }
    let body = String::from_utf8_lossy(&body).into_owned();

    let (status, payload) = route(&method, &path, &body, state);
    let response = format!(
        "HTTP/1.1 {} {}\r\nContent-Type: application/json; charset=utf-8\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        status,
        if status == 200 { "OK" } else { "Error" },
        payload.len(),
        payload
    );
    stream.write_all(response.as_bytes())
}

fn route(method: &str, path: &str, body: &str, state: &Mutex<State>) -> (u16, String) {
    let mut state = state.lock().expect("mock webdriver state");
    match (method, path) {
        ("POST", "/session") => {
            state.session_counter += 1;
            let id = format!("mock-session-{}", state.session_counter);
            (
                200,
                format!(
                    "{{\"value\": {{\"sessionId\": \"{}\", \"capabilities\": {{}}}}}}",
                    id
                ),
            )
        }
        ("POST", p) if p.starts_with("/session/") && p.ends_with("/url") => {
            let url = body
                .split("\"url\"")
                .nth(1)
                .and_then(|rest| rest.split('"').nth(1))
                .unwrap_or_default()
                .to_owned();
            if state.pages.contains_key(&url) {
                state.current_url = url;
                (200, "{\"value\": null}".to_owned())
            } else {
                (
                    404,
                    "{\"value\": {\"error\": \"unknown error\", \"message\": \"page not in mock\"}}"
                        .to_owned(),
                )
            }
        }
        ("GET", p) if p.starts_with("/session/") && p.ends_with("/url") => (
            200,
            format!("{{\"value\": \"{}\"}}", state.current_url),
        ),
        ("GET", p) if p.starts_with("/session/") && p.ends_with("/source") => {
            let raw = state
                .pages
                .get(&state.current_url)
                .cloned()
                .unwrap_or_default();
            let rendered = render(&raw);
            (200, format!("{{\"value\": {}}}", json_string(&rendered)))
        }
        ("DELETE", p) if p.starts_with("/session/") => (200, "{\"value\": null}".to_owned()),
        _ => (
            404,
            "{\"value\": {\"error\": \"unknown command\", \"message\": \"not implemented\"}}"
                .to_owned(),
        ),
    }
}

/// Applies the pretend script effect: append the marked markup before
/// `</body>`.
fn render(source: &str) -> String {
    let Some(idx) = source.find("data-render-append=\"") else {
        return source.to_owned();
    };
    let rest = &source[idx + "data-render-append=\"".len()..];
    let Some(end) = rest.find('"') else {
        return source.to_owned();
    };
    let injected = &rest[..end];
    match source.rfind("</body>") {
        Some(pos) => {
            let mut out = String::with_capacity(source.len() + injected.len());
            out.push_str(&source[..pos]);
            out.push_str(injected);
            out.push_str(&source[pos..]);
            out
        }
        None => format!("{}{}", source, injected),
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
