//! Static HTTP backend: plain GETs, no script execution.

use std::time::Duration;

use log::info;
use url::Url;

use super::{BackendError, Capabilities, FetchBackend, Page};

pub const DEFAULT_USER_AGENT: &str = concat!("webquery/", env!("CARGO_PKG_VERSION"));

/// Fetches pages with a configured user agent, timeouts, and redirect cap.
pub struct HttpBackend {
    agent: ureq::Agent,
    closed: bool,
}

impl HttpBackend {
    /// Defaults: 30 s navigation timeout, 10 s connect timeout, at most
    /// 5 redirects.
    pub fn new() -> HttpBackend {
        HttpBackend::with_options(Duration::from_secs(30), Duration::from_secs(10), 5)
    }

    pub fn with_options(
        navigation_timeout: Duration,
        connect_timeout: Duration,
        max_redirects: u32,
    ) -> HttpBackend {
        let config = ureq::Agent::config_builder()
            .user_agent(DEFAULT_USER_AGENT)
            .timeout_global(Some(navigation_timeout))
            .timeout_connect(Some(connect_timeout))
            .max_redirects(max_redirects)
            .max_redirects_will_error(true)
            .http_status_as_error(false)
            .build();
        HttpBackend {
            agent: config.new_agent(),
            closed: false,
        }
    }
}

impl Default for HttpBackend {
    fn default() -> Self {
        HttpBackend::new()
    }
}

impl FetchBackend for HttpBackend {
    fn navigate(&mut self, url: &Url) -> Result<Page, BackendError> {
        if self.closed {
            return Err(BackendError::Closed);
        }
        if url.scheme() != "http" && url.scheme() != "https" {
            return Err(BackendError::MalformedUrl {
                url: url.to_string(),
                message: "only http/https URLs can be navigated".to_owned(),
            });
        }

        let mut response = self
            .agent
            .get(url.as_str())
            .call()
            .map_err(|e| classify(e, url))?;

        let status = response.status().as_u16();
        if status >= 400 {
            return Err(BackendError::Http {
                status,
                url: url.to_string(),
            });
        }

        let final_url = {
            use ureq::ResponseExt;
            let uri = response.get_uri().to_string();
            Url::parse(&uri).map_err(|e| BackendError::MalformedUrl {
                url: uri,
                message: e.to_string(),
            })?
        };
        let charset = response
            .headers()
            .get("content-type")
            .and_then(|v| v.to_str().ok())
            .and_then(parse_charset);
        let body = response
            .body_mut()
            .read_to_vec()
            .map_err(|e| BackendError::Network(e.to_string()))?;

        info!(
            "navigated url={} status={} bytes={}",
            final_url,
            status,
            body.len()
        );
        Ok(Page {
            final_url,
            body,
            status,
            charset,
        })
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

fn classify(error: ureq::Error, url: &Url) -> BackendError {
    match error {
        ureq::Error::StatusCode(status) => BackendError::Http {
            status,
            url: url.to_string(),
        },
        ureq::Error::Timeout(t) => BackendError::NavigationTimeout(t.to_string()),
        other => BackendError::Network(other.to_string()),
    }
}

pub(crate) fn parse_charset(content_type: &str) -> Option<String> {
    content_type
        .split(';')
        .skip(1)
        .map(str::trim)
        .find_map(|param| {
            let (key, value) = param.split_once('=')?;
            if key.trim().eq_ignore_ascii_case("charset") {
                Some(value.trim().trim_matches('"').to_ascii_lowercase())
            } else {
                None
            }
        })
}
