//! Remote-browser backend speaking the standard WebDriver wire protocol to an
//! externally launched browser or driver (geckodriver, chromedriver, a grid).
//! Navigation waits for the page load, then retrieves the rendered DOM.

use std::time::Duration;

use log::{debug, info};
use serde_json::{json, Value};
use url::Url;

use super::{BackendError, Capabilities, FetchBackend, Page};

pub struct BrowserBackend {
    endpoint: String,
    agent: ureq::Agent,
    session_id: Option<String>,
    headless: bool,
    closed: bool,
}

impl BrowserBackend {
    /// `endpoint` is the driver's base URL, e.g. `http://127.0.0.1:4444`.
    /// The session is created lazily on first navigation.
    pub fn new(endpoint: &str, headless: bool, navigation_timeout: Duration) -> BrowserBackend {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(navigation_timeout))
            .http_status_as_error(false)
            .build();
        BrowserBackend {
            endpoint: endpoint.trim_end_matches('/').to_owned(),
            agent: config.new_agent(),
            session_id: None,
            headless,
            closed: false,
        }
    }

    fn ensure_session(&mut self) -> Result<String, BackendError> {
        if let Some(id) = &self.session_id {
            return Ok(id.clone());
        }
        let mut always_match = serde_json::Map::new();
        if self.headless {
            always_match.insert(
                "goog:chromeOptions".to_owned(),
                json!({ "args": ["--headless=new"] }),
            );
            always_match.insert(
                "moz:firefoxOptions".to_owned(),
                json!({ "args": ["-headless"] }),
            );
        }
        let body = json!({ "capabilities": { "alwaysMatch": Value::Object(always_match) } });
        let value = self.post(&format!("{}/session", self.endpoint), &body)?;
        let session_id = value
            .get("sessionId")
            .and_then(Value::as_str)
            .ok_or_else(|| {
                BackendError::Unavailable("session response carried no sessionId".to_owned())
            })?
            .to_owned();
        info!("browser session created id={}", session_id);
        self.session_id = Some(session_id.clone());
        Ok(session_id)
    }

    fn post(&self, url: &str, body: &Value) -> Result<Value, BackendError> {
        let response = self
            .agent
            .post(url)
            .header("content-type", "application/json")
            .send(body.to_string())
            .map_err(classify)?;
        Self::unwrap_value(response)
    }

    fn get(&self, url: &str) -> Result<Value, BackendError> {
        let response = self.agent.get(url).call().map_err(classify)?;
        Self::unwrap_value(response)
    }

    fn unwrap_value(mut response: ureq::http::Response<ureq::Body>) -> Result<Value, BackendError> {
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        let parsed: Value = serde_json::from_str(&text).map_err(|e| {
            BackendError::Unavailable(format!("malformed wire response: {}", e))
        })?;
        let value = parsed.get("value").cloned().unwrap_or(Value::Null);
        if status >= 400 {
            let message = value
                .get("message")
                .and_then(Value::as_str)
                .unwrap_or("request rejected")
                .to_owned();
            let error = value.get("error").and_then(Value::as_str).unwrap_or("");
            if error == "timeout" || error == "script timeout" {
                return Err(BackendError::NavigationTimeout(message));
            }
            return Err(BackendError::Unavailable(format!("{}: {}", error, message)));
        }
        Ok(value)
    }
}

impl FetchBackend for BrowserBackend {
    fn navigate(&mut self, url: &Url) -> Result<Page, BackendError> {
        if self.closed {
            return Err(BackendError::Closed);
        }
        let session = self.ensure_session()?;
        let base = format!("{}/session/{}", self.endpoint, session);

        debug!("browser navigate url={}", url);
        self.post(&format!("{}/url", base), &json!({ "url": url.as_str() }))?;

        let current = self.get(&format!("{}/url", base))?;
        let final_url = current
            .as_str()
            .and_then(|s| Url::parse(s).ok())
            .unwrap_or_else(|| url.clone());

        let source = self.get(&format!("{}/source", base))?;
        let dom = source.as_str().unwrap_or_default().to_owned();
        // The wire protocol returns the serialized DOM, not raw transport
        // bytes; a rendered page counts as a successful 200 fetch.
        Ok(Page {
            final_url,
            body: dom.into_bytes(),
            status: 200,
            charset: Some("utf-8".to_owned()),
        })
    }

    fn close(&mut self) -> Result<(), BackendError> {
        if self.closed {
            return Ok(());
        }
        self.closed = true;
        if let Some(session) = self.session_id.take() {
            let url = format!("{}/session/{}", self.endpoint, session);
            let _ = self.agent.delete(&url).call();
        }
        Ok(())
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            renders_javascript: true,
        }
    }
}

impl Drop for BrowserBackend {
    fn drop(&mut self) {
        let _ = self.close();
    }
}

fn classify(error: ureq::Error) -> BackendError {
    match error {
        ureq::Error::Timeout(t) => BackendError::NavigationTimeout(t.to_string()),
        other => BackendError::Unavailable(other.to_string()),
    }
}
