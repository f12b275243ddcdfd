//! Fetch backends: the navigation contract plus its implementations: a
//! static HTTP fetcher, a remote-browser client, and an in-memory page map
//! for hermetic runs. A local fixture server lives here too.

mod browser;
mod fixture;
mod http;
mod sitegen;

pub use browser::BrowserBackend;
pub use fixture::{serve_fixture, FixtureServer, FixtureSite, RouteTarget};
pub use http::HttpBackend;
pub use sitegen::{generate_benchmark_site, tier_query_json5, BenchmarkTier};

use std::collections::HashMap;

use thiserror::Error;
use url::Url;

/// A fetched page, ready for parsing.
#[derive(Debug, Clone)]
pub struct Page {
    /// Where the fetch ended up after redirects.
    pub final_url: Url,
    pub body: Vec<u8>,
    pub status: u16,
    /// Character set declared by the transport (e.g. Content-Type), if any.
    pub charset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub renders_javascript: bool,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("network error: {0}")]
    Network(String),
    #[error("http error: status {status} for {url}")]
    Http { status: u16, url: String },
    #[error("backend is closed")]
    Closed,
    #[error("browser endpoint unavailable: {0}")]
    Unavailable(String),
    #[error("navigation timed out: {0}")]
    NavigationTimeout(String),
    #[error("malformed url `{url}`: {message}")]
    MalformedUrl { url: String, message: String },
}

/// The navigation contract every backend implements: fetch pages one at a
/// time, then close. After `close`, `navigate` fails with [`BackendError::Closed`];
/// closing twice is a no-op.
pub trait FetchBackend {
    fn navigate(&mut self, url: &Url) -> Result<Page, BackendError>;
    fn close(&mut self) -> Result<(), BackendError>;
    fn capabilities(&self) -> Capabilities;
}

/// Serves pages from an in-memory map keyed by exact URL. Used for hermetic
/// tests and embedding; unknown URLs yield 404.
#[derive(Debug, Default)]
pub struct InMemoryBackend {
    pages: HashMap<String, Vec<u8>>,
    redirects: HashMap<String, String>,
    visited: Vec<String>,
    closed: bool,
}

impl InMemoryBackend {
    pub fn new() -> InMemoryBackend {
        InMemoryBackend::default()
    }

    pub fn page(mut self, url: &str, body: impl Into<Vec<u8>>) -> InMemoryBackend {
        self.pages.insert(url.to_owned(), body.into());
        self
    }

    pub fn redirect(mut self, from: &str, to: &str) -> InMemoryBackend {
        self.redirects.insert(from.to_owned(), to.to_owned());
        self
    }

    /// URLs navigated so far, in order.
    pub fn visited(&self) -> &[String] {
        &self.visited
    }
}

impl FetchBackend for InMemoryBackend {
    fn navigate(&mut self, url: &Url) -> Result<Page, BackendError> {
        if self.closed {
            return Err(BackendError::Closed);
        }
        self.visited.push(url.to_string());
        let mut current = url.to_string();
        let mut hops = 0;
        while let Some(target) = self.redirects.get(&current) {
            current = target.clone();
            hops += 1;
            if hops > 5 {
                return Err(BackendError::Network("redirect loop".to_owned()));
            }
        }
        match self.pages.get(&current) {
            Some(body) => Ok(Page {
                final_url: Url::parse(&current).map_err(|e| BackendError::MalformedUrl {
                    url: current.clone(),
                    message: e.to_string(),
                })?,
                body: body.clone(),
                status: 200,
                charset: Some("utf-8".to_owned()),
            }),
            None => Err(BackendError::Http {
                status: 404,
                url: current,
            }),
        }
    }

    fn close(&mut self) -> Result<(), BackendError> {
        self.closed = true;
        Ok(())
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            renders_javascript: false,
        }
    }
}
