//! Extraction records: the JSON-like values the executor assembles.

use crate::value::escape_json_string;

/// One extracted value. Objects keep field order as written in the query.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordValue {
    Null,
    String(String),
    Array(Vec<RecordValue>),
    Object(Vec<(String, RecordValue)>),
}

impl RecordValue {
    pub fn object() -> RecordValue {
        RecordValue::Object(Vec::new())
    }

    /// Inserts `key` unless it already exists. Returns whether it was added.
    pub fn insert(&mut self, key: &str, value: RecordValue) -> bool {
        let RecordValue::Object(entries) = self else {
            panic!("insert on non-object record");
        };
        if entries.iter().any(|(k, _)| k == key) {
            return false;
        }
        entries.push((key.to_owned(), value));
        true
    }

    pub fn get(&self, key: &str) -> Option<&RecordValue> {
        match self {
            RecordValue::Object(entries) => {
                entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
            }
            _ => None,
        }
    }

    pub fn keys(&self) -> Vec<&str> {
        match self {
            RecordValue::Object(entries) => entries.iter().map(|(k, _)| k.as_str()).collect(),
            _ => Vec::new(),
        }
    }
}

/// Serializes a record array as pretty-printed JSON: 2-space indent, `\uXXXX`
/// escapes for non-ASCII when `ensure_ascii`, trailing newline. Deterministic.
pub fn records_to_json(records: &[RecordValue], ensure_ascii: bool) -> String {
    let mut out = String::new();
    write_value_list(records, ensure_ascii, &mut out, 0);
    out.push('\n');
    out
}

fn write_value_list(items: &[RecordValue], ensure_ascii: bool, out: &mut String, indent: usize) {
    if items.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, item) in items.iter().enumerate() {
        push_indent(out, indent + 2);
        write_value(item, ensure_ascii, out, indent + 2);
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    push_indent(out, indent);
    out.push(']');
}

fn write_value(value: &RecordValue, ensure_ascii: bool, out: &mut String, indent: usize) {
    match value {
        RecordValue::Null => out.push_str("null"),
        RecordValue::String(s) => escape_json_string(s, ensure_ascii, out),
        RecordValue::Array(items) => write_value_list(items, ensure_ascii, out, indent),
        RecordValue::Object(entries) => {
            if entries.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (key, value)) in entries.iter().enumerate() {
                push_indent(out, indent + 2);
                escape_json_string(key, ensure_ascii, out);
                out.push_str(": ");
                write_value(value, ensure_ascii, out, indent + 2);
                if i + 1 < entries.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, n: usize) {
    for _ in 0..n {
        out.push(' ');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_record_list() {
        assert_eq!(records_to_json(&[], true), "[]\n");
    }

    #[test]
    fn ascii_escaping_in_output() {
        let rec = RecordValue::Object(vec![(
            "number_of_posts".into(),
            RecordValue::String("R: 82 / I: 14\u{25b6}".into()),
        )]);
        let text = records_to_json(&[rec], true);
        assert_eq!(
            text,
            "[\n  {\n    \"number_of_posts\": \"R: 82 / I: 14\\u25b6\"\n  }\n]\n"
        );
    }

    #[test]
    fn write_is_deterministic() {
        let rec = RecordValue::Object(vec![
            ("a".into(), RecordValue::Null),
            ("b".into(), RecordValue::Array(vec![RecordValue::String("x".into())])),
        ]);
        let one = records_to_json(std::slice::from_ref(&rec), true);
        let two = records_to_json(&[rec], true);
        assert_eq!(one, two);
    }
}
