//! A declarative web data-extraction engine.
//!
//! Queries are JSON5 or YAML documents built from a handful of `@` keywords:
//! `@url` names the start page, `@steps` selects elements with XPath and
//! extracts `@fields` from each, `@follow` hops to linked pages for nested
//! records, and `@pagination` walks next-page chains. Stripping the keywords
//! from a query leaves exactly the structure of its output.
//!
//! ```no_run
//! use webquery::backend::HttpBackend;
//! use webquery::executor::{execute, ExecutionOptions};
//! use webquery::query::{parse_query, QueryFormat};
//!
//! let text = r#"{
//!   "@url": "https://example.com/catalog",
//!   "@steps": [{
//!     "@xpath": "//div[contains(@class, 'thread')]",
//!     "@fields": {
//!       "title": ".//div[contains(@class, 'teaser')]/text()",
//!       "link": "./a/@href"
//!     }
//!   }]
//! }"#;
//! let query = parse_query(text, QueryFormat::Json5).unwrap();
//! let mut backend = HttpBackend::new();
//! let records = execute(&query, &mut backend, &ExecutionOptions::default()).unwrap();
//! ```
//!
//! Modules: [`query`] (model, parsing, validation, output shape), [`html`]
//! (lenient parsing), [`xpath`] (the selector dialect), [`backend`] (static
//! HTTP, remote browser, fixture server), [`executor`] (the walk),
//! [`mod@bench`] (the measurement harness), [`cli`] (the `webquery` binary).

pub mod backend;
pub mod bench;
pub mod cli;
pub mod executor;
pub mod html;
pub mod query;
pub mod record;
pub mod value;
pub mod xpath;
