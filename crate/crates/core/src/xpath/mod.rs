//! XPath evaluation over parsed HTML, covering the dialect queries use.
//!
//! Supported: the child (`/`), descendant-or-self (`//`), self (`.`),
//! parent (`..`) and attribute (`@name`) axes; `name`, `*` and `text()` node
//! tests; positional `[n]` predicates; `contains()`, string equality, `and`,
//! `or`; `normalize-space()` with and without an argument. Anything outside
//! the dialect is rejected at parse time with the offending construct named,
//! so bad expressions surface at query validation rather than mid-crawl.

mod ast;
mod eval;
mod parser;

pub use ast::{Axis, BoolExpr, Expr, NodeTest, Path, PathStep, Predicate, ValueExpr};
pub use eval::{extract, select, ExtractedValue};
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum XPathError {
    #[error("xpath syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported xpath construct: {construct}")]
    Unsupported { construct: String },
}

/// Parses and evaluates `expr`, returning matching nodes in document order.
pub fn select_str(
    doc: &crate::html::Document,
    context: crate::html::NodeRef,
    expr: &str,
) -> Result<Vec<crate::html::NodeRef>, XPathError> {
    let parsed = parse(expr)?;
    Ok(select(doc, context, &parsed.path))
}

/// Parses and evaluates `expr` as a value extraction: no match is `Null`,
/// one match is a string, two or more are an array of strings.
pub fn extract_str(
    doc: &crate::html::Document,
    context: crate::html::NodeRef,
    expr: &str,
) -> Result<ExtractedValue, XPathError> {
    let parsed = parse(expr)?;
    Ok(extract(doc, context, &parsed))
}
