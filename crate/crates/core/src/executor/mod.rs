//! Query execution: walk a validated query against a fetch backend, select
//! elements per step, extract fields, follow links, paginate, and assemble
//! the record array.
//!
//! Failure posture: root navigation errors and malformed expressions are
//! fatal; a dead followed link or a broken pagination chain is logged and
//! the crawl keeps whatever it has gathered.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use thiserror::Error;
use url::Url;

use crate::backend::{BackendError, FetchBackend, Page};
use crate::html::{parse_html, Document, NodeRef};
use crate::query::{validate, FollowSpec, Query, Step, Violation};
use crate::record::RecordValue;
use crate::xpath::{self, ExtractedValue, XPathError};

#[derive(Debug, Clone)]
pub struct ExecutionOptions {
    /// How deep `@follow` chains may nest.
    pub max_follow_depth: u32,
    /// Hard cap on pages per paginated step, overriding larger `@limit`s.
    pub max_pages_per_step: u32,
    /// Pause between consecutive navigations.
    pub politeness_delay: Duration,
}

impl Default for ExecutionOptions {
    fn default() -> Self {
        ExecutionOptions {
            max_follow_depth: 5,
            max_pages_per_step: 100,
            politeness_delay: Duration::ZERO,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("invalid query: {0:?}")]
    InvalidQuery(Vec<Violation>),
    #[error("root navigation failed: {0}")]
    RootNavigation(BackendError),
    #[error(transparent)]
    Xpath(#[from] XPathError),
    #[error("cannot resolve url `{href}` against {base}: {message}")]
    MalformedUrl {
        base: String,
        href: String,
        message: String,
    },
}

/// Executes a query against a backend, returning one record per matched
/// element, concatenated across steps and pagination pages in encounter
/// order. Output is deterministic given deterministic pages.
pub fn execute(
    query: &Query,
    backend: &mut dyn FetchBackend,
    options: &ExecutionOptions,
) -> Result<Vec<RecordValue>, ExecError> {
    let violations = validate(query);
    if !violations.is_empty() {
        return Err(ExecError::InvalidQuery(violations));
    }

    let root_url = Url::parse(&query.url).expect("validated queries carry absolute urls");
    let mut throttle = Throttle::new(options.politeness_delay);
    throttle.wait();
    let root_page = backend
        .navigate(&root_url)
        .map_err(ExecError::RootNavigation)?;

    let mut records = Vec::new();
    for step in &query.steps {
        let pages = if step.pagination.is_some() {
            paginate(step, &root_page, backend, options, &mut throttle)?
        } else {
            vec![parse_page(&root_page)]
        };
        for parsed in &pages {
            let step_records = execute_step(
                step,
                parsed.doc.root_ref(),
                parsed,
                backend,
                options,
                &mut throttle,
                0,
            )?;
            records.extend(step_records);
        }
    }
    Ok(records)
}

/// A fetched page together with its parsed tree.
pub struct ParsedPage {
    pub page: Page,
    pub doc: Document,
}

fn parse_page(page: &Page) -> ParsedPage {
    let doc = parse_html(&page.body, page.final_url.clone(), page.charset.as_deref());
    ParsedPage {
        page: page.clone(),
        doc,
    }
}

/// Runs one step against a context node: selects elements, extracts fields
/// per element, and applies the step's follow. One record per element, in
/// document order.
#[allow(clippy::too_many_arguments)]
pub fn execute_step(
    step: &Step,
    context: NodeRef,
    parsed: &ParsedPage,
    backend: &mut dyn FetchBackend,
    options: &ExecutionOptions,
    throttle: &mut Throttle,
    depth: u32,
) -> Result<Vec<RecordValue>, ExecError> {
    let selector = xpath::parse(&step.xpath)?;
    let elements = xpath::select(&parsed.doc, context, &selector.path);
    debug!(
        "step xpath={} matched={} depth={}",
        step.xpath,
        elements.len(),
        depth
    );

    let mut records = Vec::with_capacity(elements.len());
    for element in elements {
        let mut record = RecordValue::object();
        if let Some(fields) = &step.fields {
            for (name, expr) in fields {
                let parsed_expr = xpath::parse(expr)?;
                let value = xpath::extract(&parsed.doc, element, &parsed_expr);
                record.insert(name, extracted_to_record(value));
            }
        }
        if let Some(follow_spec) = &step.follow {
            follow(
                follow_spec,
                element,
                &mut record,
                parsed,
                backend,
                options,
                throttle,
                depth,
            )?;
        }
        records.push(record);
    }
    Ok(records)
}

fn extracted_to_record(value: ExtractedValue) -> RecordValue {
    match value {
        ExtractedValue::Null => RecordValue::Null,
        ExtractedValue::String(s) => RecordValue::String(s),
        ExtractedValue::Strings(items) => {
            RecordValue::Array(items.into_iter().map(RecordValue::String).collect())
        }
    }
}

/// Navigates to the first URL the follow expression yields and attaches the
/// inner steps' records to `parent`: named steps under their name, unnamed
/// steps merged in when they produce exactly one record, otherwise under the
/// reserved key `items`.
///
/// A missing URL, an exhausted depth budget, or a failed navigation leaves
/// the named keys as empty arrays and the crawl continues.
#[allow(clippy::too_many_arguments)]
pub fn follow(
    spec: &FollowSpec,
    element: NodeRef,
    parent: &mut RecordValue,
    parsed: &ParsedPage,
    backend: &mut dyn FetchBackend,
    options: &ExecutionOptions,
    throttle: &mut Throttle,
    depth: u32,
) -> Result<(), ExecError> {
    let expr = xpath::parse(&spec.xpath)?;
    let target = xpath::extract(&parsed.doc, element, &expr);
    let Some(href) = target.first().map(str::to_owned) else {
        debug!("follow xpath={} yielded no url", spec.xpath);
        attach_empty(spec, parent);
        return Ok(());
    };

    if depth >= options.max_follow_depth {
        warn!(
            "follow depth limit {} reached, skipping {}",
            options.max_follow_depth, href
        );
        attach_empty(spec, parent);
        return Ok(());
    }

    let resolved = match resolve_url(&parsed.page.final_url, &href) {
        Ok(url) => url,
        Err(e) => {
            warn!("follow target unusable: {}", e);
            attach_empty(spec, parent);
            return Ok(());
        }
    };

    throttle.wait();
    let next_page = match backend.navigate(&resolved) {
        Ok(page) => page,
        Err(e) => {
            warn!("follow navigation to {} failed: {}", resolved, e);
            attach_empty(spec, parent);
            return Ok(());
        }
    };

    let next_parsed = parse_page(&next_page);
    for inner in &spec.steps {
        let inner_records = execute_step(
            inner,
            next_parsed.doc.root_ref(),
            &next_parsed,
            backend,
            options,
            throttle,
            depth + 1,
        )?;
        attach(inner, inner_records, parent);
    }
    Ok(())
}

fn attach(inner: &Step, records: Vec<RecordValue>, parent: &mut RecordValue) {
    match &inner.name {
        Some(name) => {
            parent.insert(name, RecordValue::Array(records));
        }
        None => {
            if records.len() == 1 {
                let RecordValue::Object(fields) = records.into_iter().next().expect("len 1")
                else {
                    return;
                };
                for (key, value) in fields {
                    parent.insert(&key, value);
                }
            } else {
                merge_items(parent, records);
            }
        }
    }
}

/// Successive unnamed multi-record steps all funnel into `items`.
fn merge_items(parent: &mut RecordValue, records: Vec<RecordValue>) {
    if let RecordValue::Object(entries) = parent {
        if let Some((_, RecordValue::Array(existing))) =
            entries.iter_mut().find(|(k, _)| k == "items")
        {
            existing.extend(records);
            return;
        }
    }
    parent.insert("items", RecordValue::Array(records));
}

fn attach_empty(spec: &FollowSpec, parent: &mut RecordValue) {
    for inner in &spec.steps {
        if let Some(name) = &inner.name {
            parent.insert(name, RecordValue::Array(Vec::new()));
        }
    }
}

/// Standard reference resolution: absolute hrefs pass through,
/// protocol-relative hrefs adopt the base scheme, and relative paths resolve
/// against the base.
pub fn resolve_url(base: &Url, href: &str) -> Result<Url, ExecError> {
    base.join(href).map_err(|e| ExecError::MalformedUrl {
        base: base.to_string(),
        href: href.to_owned(),
        message: e.to_string(),
    })
}

/// Walks a paginated step's page chain: the first page, then each next-page
/// URL in turn, bounded by the smaller of `@limit` and the per-step cap, the
/// chain running out, or a URL repeating.
pub fn paginate(
    step: &Step,
    first_page: &Page,
    backend: &mut dyn FetchBackend,
    options: &ExecutionOptions,
    throttle: &mut Throttle,
) -> Result<Vec<ParsedPage>, ExecError> {
    let spec = step
        .pagination
        .as_ref()
        .expect("paginate called on a step with @pagination");
    let expr = xpath::parse(&spec.xpath)?;
    let limit = (spec.limit.max(0) as u64).min(options.max_pages_per_step as u64) as usize;

    let mut pages = vec![parse_page(first_page)];
    let mut visited: HashSet<String> = HashSet::new();
    visited.insert(first_page.final_url.to_string());

    while pages.len() < limit {
        let current = pages.last().expect("chain starts non-empty");
        let next = xpath::extract(&current.doc, current.doc.root_ref(), &expr);
        let Some(href) = next.first().map(str::to_owned) else {
            debug!("pagination chain exhausted after {} page(s)", pages.len());
            break;
        };
        let resolved = match resolve_url(&current.page.final_url, &href) {
            Ok(url) => url,
            Err(e) => {
                warn!("pagination target unusable: {}", e);
                break;
            }
        };
        if !visited.insert(resolved.to_string()) {
            debug!("pagination cycle at {}, stopping", resolved);
            break;
        }
        throttle.wait();
        match backend.navigate(&resolved) {
            Ok(page) => {
                info!("pagination advanced to {}", page.final_url);
                pages.push(parse_page(&page));
            }
            Err(e) => {
                warn!("pagination navigation to {} failed: {}", resolved, e);
                break;
            }
        }
    }
    Ok(pages)
}

/// Spaces navigations out by the configured politeness delay.
pub struct Throttle {
    delay: Duration,
    last: Option<Instant>,
}

impl Throttle {
    pub fn new(delay: Duration) -> Throttle {
        Throttle { delay, last: None }
    }

    pub fn wait(&mut self) {
        if self.delay > Duration::ZERO {
            if let Some(last) = self.last {
                let elapsed = last.elapsed();
                if elapsed < self.delay {
                    std::thread::sleep(self.delay - elapsed);
                }
            }
        }
        self.last = Some(Instant::now());
    }
}
