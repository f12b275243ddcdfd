//! Rendering a query model back to JSON5 and YAML text.

use super::{FollowSpec, PaginationSpec, Query, Step};
use crate::value::ConfigValue;

/// Renders the query as JSON5 (plain JSON, which every JSON5 parser accepts).
pub fn to_json5(query: &Query) -> String {
    let mut text = to_config(query).to_json_pretty();
    text.push('\n');
    text
}

/// Renders the query as YAML. Keyword keys are double-quoted because a plain
/// YAML scalar may not start with `@`.
pub fn to_yaml(query: &Query) -> String {
    let mut out = String::new();
    write_yaml(&to_config(query), &mut out, 0, false);
    out
}

fn to_config(query: &Query) -> ConfigValue {
    ConfigValue::Object(vec![
        ("@url".to_owned(), ConfigValue::String(query.url.clone())),
        (
            "@steps".to_owned(),
            ConfigValue::Array(query.steps.iter().map(step_to_config).collect()),
        ),
    ])
}

fn step_to_config(step: &Step) -> ConfigValue {
    let mut entries = vec![("@xpath".to_owned(), ConfigValue::String(step.xpath.clone()))];
    if let Some(name) = &step.name {
        entries.push(("@name".to_owned(), ConfigValue::String(name.clone())));
    }
    if let Some(fields) = &step.fields {
        entries.push((
            "@fields".to_owned(),
            ConfigValue::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.clone(), ConfigValue::String(v.clone())))
                    .collect(),
            ),
        ));
    }
    if let Some(follow) = &step.follow {
        entries.push(("@follow".to_owned(), follow_to_config(follow)));
    }
    if let Some(p) = &step.pagination {
        entries.push(("@pagination".to_owned(), pagination_to_config(p)));
    }
    ConfigValue::Object(entries)
}

fn follow_to_config(follow: &FollowSpec) -> ConfigValue {
    ConfigValue::Object(vec![
        ("@xpath".to_owned(), ConfigValue::String(follow.xpath.clone())),
        (
            "@steps".to_owned(),
            ConfigValue::Array(follow.steps.iter().map(step_to_config).collect()),
        ),
    ])
}

fn pagination_to_config(p: &PaginationSpec) -> ConfigValue {
    ConfigValue::Object(vec![
        ("@xpath".to_owned(), ConfigValue::String(p.xpath.clone())),
        ("@limit".to_owned(), ConfigValue::Int(p.limit)),
    ])
}

// YAML emitter for the subset of trees a query serializes to: objects,
// arrays of objects, strings and integers. Every string is double-quoted
// with JSON-style escapes, which YAML 1.2 accepts verbatim.
fn write_yaml(value: &ConfigValue, out: &mut String, indent: usize, inline_first: bool) {
    match value {
        ConfigValue::Object(entries) => {
            for (i, (key, val)) in entries.iter().enumerate() {
                if i > 0 || !inline_first {
                    push_indent(out, indent);
                }
                crate::value::escape_json_string(key, false, out);
                out.push(':');
                match val {
                    ConfigValue::Object(_) | ConfigValue::Array(_) => {
                        out.push('\n');
                        write_yaml(val, out, indent + 2, false);
                    }
                    scalar => {
                        out.push(' ');
                        write_yaml_scalar(scalar, out);
                        out.push('\n');
                    }
                }
            }
        }
        ConfigValue::Array(items) => {
            for item in items {
                push_indent(out, indent);
                out.push_str("- ");
                match item {
                    ConfigValue::Object(_) => write_yaml(item, out, indent + 2, true),
                    scalar => {
                        write_yaml_scalar(scalar, out);
                        out.push('\n');
                    }
                }
            }
        }
        scalar => {
            push_indent(out, indent);
            write_yaml_scalar(scalar, out);
            out.push('\n');
        }
    }
}

fn write_yaml_scalar(value: &ConfigValue, out: &mut String) {
    match value {
        ConfigValue::String(s) => crate::value::escape_json_string(s, false, out),
        ConfigValue::Int(n) => out.push_str(&n.to_string()),
        ConfigValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ConfigValue::Null => out.push_str("null"),
        ConfigValue::Float(f) => out.push_str(&f.to_string()),
        _ => unreachable!("composite handled by write_yaml"),
    }
}

fn push_indent(out: &mut String, n: usize) {
    for _ in 0..n {
        out.push(' ');
    }
}
