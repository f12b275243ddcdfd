//! Output-shape derivation: the record structure a query implies, computed
//! without executing it.

use super::{validate, Query, QueryError, Step};
use crate::record::RecordValue;

/// A structural description of query output: a tree of objects with known
/// keys, arrays, and extracted scalars.
///
/// `Scalar` stands for one extracted value, which at runtime is a string,
/// an array of strings (two or more matches), or null (no match).
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeDescriptor {
    Scalar,
    Array(Box<ShapeDescriptor>),
    Object(Vec<(String, ShapeDescriptor)>),
}

impl ShapeDescriptor {
    pub fn keys(&self) -> Vec<&str> {
        match self {
            ShapeDescriptor::Object(entries) => entries.iter().map(|(k, _)| k.as_str()).collect(),
            _ => Vec::new(),
        }
    }
}

/// Derives the output shape of a valid query: an array of objects whose keys
/// come from each step's fields, with named follow steps contributing nested
/// record arrays and unnamed follow steps merging into the parent.
pub fn output_shape(query: &Query) -> Result<ShapeDescriptor, QueryError> {
    let violations = validate(query);
    if !violations.is_empty() {
        return Err(QueryError::Invalid { violations });
    }

    let mut entries: Vec<(String, ShapeDescriptor)> = Vec::new();
    for step in &query.steps {
        for (key, shape) in step_shape(step) {
            if !entries.iter().any(|(k, _)| *k == key) {
                entries.push((key, shape));
            }
        }
    }
    Ok(ShapeDescriptor::Array(Box::new(ShapeDescriptor::Object(entries))))
}

/// The object keys one step contributes to each of its records.
pub(crate) fn step_shape(step: &Step) -> Vec<(String, ShapeDescriptor)> {
    let mut entries: Vec<(String, ShapeDescriptor)> = Vec::new();
    if let Some(fields) = &step.fields {
        for (name, _) in fields {
            entries.push((name.clone(), ShapeDescriptor::Scalar));
        }
    }
    if let Some(follow) = &step.follow {
        for inner in &follow.steps {
            match &inner.name {
                Some(name) => {
                    let inner_shape = ShapeDescriptor::Object(step_shape(inner));
                    entries.push((name.clone(), ShapeDescriptor::Array(Box::new(inner_shape))));
                }
                None => {
                    for (key, shape) in step_shape(inner) {
                        if !entries.iter().any(|(k, _)| *k == key) {
                            entries.push((key, shape));
                        }
                    }
                }
            }
        }
    }
    entries
}

/// Checks that a result conforms to a shape. Object conformance requires the
/// record's keys to be exactly the shape's keys, in order, when the shape has
/// a single contributing step; a missing extraction is still a conforming
/// `null`. Returns the locator of the first mismatch.
pub fn conforms(value: &RecordValue, shape: &ShapeDescriptor) -> Result<(), String> {
    conforms_at(value, shape, "$")
}

fn conforms_at(value: &RecordValue, shape: &ShapeDescriptor, path: &str) -> Result<(), String> {
    match shape {
        ShapeDescriptor::Scalar => match value {
            RecordValue::Null | RecordValue::String(_) => Ok(()),
            RecordValue::Array(items) => {
                if items.len() < 2 {
                    return Err(format!("{}: scalar array must have length >= 2", path));
                }
                for (i, item) in items.iter().enumerate() {
                    if !matches!(item, RecordValue::String(_)) {
                        return Err(format!("{}[{}]: expected a string", path, i));
                    }
                }
                Ok(())
            }
            RecordValue::Object(_) => Err(format!("{}: expected a scalar, found an object", path)),
        },
        ShapeDescriptor::Array(elem) => match value {
            RecordValue::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    conforms_at(item, elem, &format!("{}[{}]", path, i))?;
                }
                Ok(())
            }
            other => Err(format!("{}: expected an array, found {}", path, kind(other))),
        },
        ShapeDescriptor::Object(entries) => match value {
            RecordValue::Object(record) => {
                // Record keys must be an in-order subset of the shape keys
                // (multiple top-level steps contribute disjoint key sets).
                let mut cursor = 0usize;
                for (key, val) in record {
                    let found = entries[cursor..].iter().position(|(k, _)| k == key);
                    match found {
                        Some(offset) => {
                            let (_, key_shape) = &entries[cursor + offset];
                            conforms_at(val, key_shape, &format!("{}.{}", path, key))?;
                            cursor += offset + 1;
                        }
                        None => {
                            return Err(format!(
                                "{}: key `{}` not in shape (or out of order)",
                                path, key
                            ))
                        }
                    }
                }
                Ok(())
            }
            other => Err(format!("{}: expected an object, found {}", path, kind(other))),
        },
    }
}

fn kind(value: &RecordValue) -> &'static str {
    match value {
        RecordValue::Null => "null",
        RecordValue::String(_) => "a string",
        RecordValue::Array(_) => "an array",
        RecordValue::Object(_) => "an object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::{parse_query, QueryFormat};

    fn shape_keys(shape: &ShapeDescriptor) -> Vec<String> {
        match shape {
            ShapeDescriptor::Array(elem) => elem.keys().iter().map(|s| s.to_string()).collect(),
            _ => panic!("expected array shape"),
        }
    }

    #[test]
    fn minimal_single_field_shape() {
        let q = parse_query(
            r#"{"@url":"https://x.example","@steps":[{"@xpath":"//a","@fields":{"x":"./@href"}}]}"#,
            QueryFormat::Json5,
        )
        .unwrap();
        let shape = output_shape(&q).unwrap();
        assert_eq!(shape_keys(&shape), ["x"]);
    }

    #[test]
    fn invalid_query_is_an_error() {
        let q = parse_query(
            r#"{"@url":"https://x.example","@steps":[{"@xpath":"//a"}]}"#,
            QueryFormat::Json5,
        )
        .unwrap();
        assert!(matches!(output_shape(&q), Err(QueryError::Invalid { .. })));
    }

    #[test]
    fn named_follow_steps_nest() {
        let q = parse_query(
            r#"{
              "@url": "https://x.example",
              "@steps": [{
                "@xpath": "//div[contains(@class, 'result')]",
                "@fields": {"a": "./@id"},
                "@follow": {
                  "@xpath": "./a/@href",
                  "@steps": [
                    {"@xpath": "//div[contains(@class, 'p')]", "@name": "profile", "@fields": {"bio": "./p/text()"}},
                    {"@xpath": "//div[contains(@class, 'r')]", "@fields": {"extra": "./span/text()"}}
                  ]
                }
              }]
            }"#,
            QueryFormat::Json5,
        )
        .unwrap();
        let shape = output_shape(&q).unwrap();
        assert_eq!(shape_keys(&shape), ["a", "profile", "extra"]);

        let rec = RecordValue::Object(vec![
            ("a".into(), RecordValue::String("1".into())),
            (
                "profile".into(),
                RecordValue::Array(vec![RecordValue::Object(vec![(
                    "bio".into(),
                    RecordValue::Null,
                )])]),
            ),
            ("extra".into(), RecordValue::String("z".into())),
        ]);
        let ShapeDescriptor::Array(elem) = &shape else { panic!() };
        conforms(&rec, elem).unwrap();
    }

    #[test]
    fn out_of_order_keys_do_not_conform() {
        let shape = ShapeDescriptor::Object(vec![
            ("a".into(), ShapeDescriptor::Scalar),
            ("b".into(), ShapeDescriptor::Scalar),
        ]);
        let rec = RecordValue::Object(vec![
            ("b".into(), RecordValue::Null),
            ("a".into(), RecordValue::Null),
        ]);
        assert!(conforms(&rec, &shape).is_err());
    }

    #[test]
    fn scalar_accepts_null_string_and_string_array() {
        let s = ShapeDescriptor::Scalar;
        conforms(&RecordValue::Null, &s).unwrap();
        conforms(&RecordValue::String("x".into()), &s).unwrap();
        conforms(
            &RecordValue::Array(vec![
                RecordValue::String("x".into()),
                RecordValue::String("y".into()),
            ]),
            &s,
        )
        .unwrap();
        assert!(conforms(&RecordValue::Array(vec![RecordValue::String("x".into())]), &s).is_err());
    }
}
