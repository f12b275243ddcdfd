//! Model-level validation. Violations are values, not errors: callers decide
//! whether to abort.

use std::collections::HashSet;
use std::fmt;

use super::{Query, Step};
use crate::xpath;

/// One invariant violation, with a JSON-path-like locator into the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Checks every model invariant and returns all violations found. An empty
/// list means the query is executable.
pub fn validate(query: &Query) -> Vec<Violation> {
    let mut out = Vec::new();

    match url::Url::parse(&query.url) {
        Ok(u) if u.scheme() == "http" || u.scheme() == "https" => {}
        Ok(u) => push(&mut out, "url", format!("expected an http/https URL, found scheme `{}`", u.scheme())),
        Err(e) => push(&mut out, "url", format!("not an absolute URL: {}", e)),
    }

    if query.steps.is_empty() {
        push(&mut out, "steps", "steps must not be empty".to_owned());
    }
    validate_steps(&query.steps, "steps", &mut out);
    out
}

fn validate_steps(steps: &[Step], path: &str, out: &mut Vec<Violation>) {
    let mut seen_names: HashSet<&str> = HashSet::new();
    for (i, step) in steps.iter().enumerate() {
        let step_path = format!("{}[{}]", path, i);
        validate_step(step, &step_path, out);
        if let Some(name) = &step.name {
            if !name.is_empty() && !seen_names.insert(name.as_str()) {
                push(out, &format!("{}.name", step_path), format!("duplicate step name `{}`", name));
            }
        }
    }
}

fn validate_step(step: &Step, path: &str, out: &mut Vec<Violation>) {
    check_xpath(&step.xpath, &format!("{}.xpath", path), out);

    if step.fields.is_none() && step.follow.is_none() {
        push(out, path, "step must have at least one of `@fields` or `@follow`".to_owned());
    }

    if let Some(name) = &step.name {
        if name.is_empty() {
            push(out, &format!("{}.name", path), "step name must not be empty".to_owned());
        }
    }

    if let Some(fields) = &step.fields {
        for (field, expr) in fields {
            let field_path = format!("{}.fields.{}", path, field);
            if field.starts_with('@') {
                push(out, &field_path, "field name must not start with the reserved prefix `@`".to_owned());
            }
            check_xpath(expr, &field_path, out);
        }
    }

    if let Some(follow) = &step.follow {
        let follow_path = format!("{}.follow", path);
        check_xpath(&follow.xpath, &format!("{}.xpath", follow_path), out);
        if follow.steps.is_empty() {
            push(out, &format!("{}.steps", follow_path), "steps must not be empty".to_owned());
        }
        validate_steps(&follow.steps, &format!("{}.steps", follow_path), out);
    }

    if let Some(p) = &step.pagination {
        let pag_path = format!("{}.pagination", path);
        check_xpath(&p.xpath, &format!("{}.xpath", pag_path), out);
        if p.limit < 1 {
            push(out, &format!("{}.limit", pag_path), format!("limit must be >= 1, found {}", p.limit));
        }
    }
}

fn check_xpath(expr: &str, path: &str, out: &mut Vec<Violation>) {
    if expr.is_empty() {
        push(out, path, "xpath expression must not be empty".to_owned());
        return;
    }
    if let Err(e) = xpath::parse(expr) {
        push(out, path, e.to_string());
    }
}

fn push(out: &mut Vec<Violation>, path: &str, message: String) {
    out.push(Violation {
        path: path.to_owned(),
        message,
    });
}
