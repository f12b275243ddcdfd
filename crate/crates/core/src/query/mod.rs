//! Query model: parse JSON5/YAML query documents into a validated model and
//! derive the output shape a query implies.
//!
//! The query surface uses `@`-prefixed keywords (`@url`, `@steps`, `@xpath`,
//! `@fields`, `@name`, `@follow`, `@pagination`); every non-`@` key inside
//! `@fields` names an output field. Removing the keywords from a query
//! document leaves exactly the structure of the output.

mod parse;
mod serialize;
mod shape;
mod validate;

pub use parse::{detect_format, parse_query, QueryFormat};
pub use serialize::{to_json5, to_yaml};
pub use shape::{conforms, output_shape, ShapeDescriptor};
pub use validate::{validate, Violation};

use thiserror::Error;

/// A parsed extraction query: a start URL plus ordered steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub url: String,
    pub steps: Vec<Step>,
}

/// One extraction step: select elements with `xpath`, then extract `fields`
/// from each, optionally following a link or paginating.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub xpath: String,
    pub name: Option<String>,
    /// Field name -> XPath expression, in source order.
    pub fields: Option<Vec<(String, String)>>,
    pub follow: Option<FollowSpec>,
    pub pagination: Option<PaginationSpec>,
}

impl Step {
    pub fn new(xpath: impl Into<String>) -> Step {
        Step {
            xpath: xpath.into(),
            name: None,
            fields: None,
            follow: None,
            pagination: None,
        }
    }
}

/// Navigate from each matched element to the first URL `xpath` yields and run
/// `steps` against the fetched page.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowSpec {
    pub xpath: String,
    pub steps: Vec<Step>,
}

/// Repeatedly chase a next-page URL, visiting at most `limit` pages
/// (counting the first).
#[derive(Debug, Clone, PartialEq)]
pub struct PaginationSpec {
    pub xpath: String,
    pub limit: i64,
}

/// Errors raised while turning query text into a [`Query`].
#[derive(Debug, Error)]
pub enum QueryError {
    #[error("{format} syntax error{}: {message}", location_suffix(.line, .column))]
    Syntax {
        format: &'static str,
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid query: {}", format_violations(.violations))]
    Invalid { violations: Vec<Violation> },
}

fn location_suffix(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {}, column {}", l, c),
        (Some(l), None) => format!(" at line {}", l),
        _ => String::new(),
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
