//! Parsing query text (JSON5 or YAML) into the query model.

use super::{FollowSpec, PaginationSpec, Query, QueryError, Step};
use crate::value::ConfigValue;

/// The two accepted query formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryFormat {
    Json5,
    Yaml,
}

impl QueryFormat {
    pub fn name(self) -> &'static str {
        match self {
            QueryFormat::Json5 => "json5",
            QueryFormat::Yaml => "yaml",
        }
    }
}

impl std::str::FromStr for QueryFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json5" | "json" => Ok(QueryFormat::Json5),
            "yaml" | "yml" => Ok(QueryFormat::Yaml),
            other => Err(format!("unknown query format `{}`", other)),
        }
    }
}

/// Guesses the format from the file extension, falling back to sniffing the
/// first non-whitespace character (`{` or `[` means JSON5).
pub fn detect_format(filename: &str, text: &str) -> QueryFormat {
    let lower = filename.to_ascii_lowercase();
    if lower.ends_with(".json") || lower.ends_with(".json5") {
        return QueryFormat::Json5;
    }
    if lower.ends_with(".yaml") || lower.ends_with(".yml") {
        return QueryFormat::Yaml;
    }
    match text.chars().find(|c| !c.is_whitespace()) {
        Some('{') | Some('[') => QueryFormat::Json5,
        _ => QueryFormat::Yaml,
    }
}

/// Parses query text into a [`Query`]. The same logical document in either
/// format yields an identical model value.
pub fn parse_query(text: &str, format: QueryFormat) -> Result<Query, QueryError> {
    let value = match format {
        QueryFormat::Json5 => json5::from_str::<ConfigValue>(text).map_err(|e| {
            let pos = e.position();
            QueryError::Syntax {
                format: "json5",
                line: pos.map(|p| p.line + 1),
                column: pos.map(|p| p.column + 1),
                message: e.to_string(),
            }
        })?,
        QueryFormat::Yaml => serde_yaml::from_str::<ConfigValue>(text).map_err(|e| {
            let loc = e.location();
            QueryError::Syntax {
                format: "yaml",
                line: loc.as_ref().map(|l| l.line()),
                column: loc.as_ref().map(|l| l.column()),
                message: e.to_string(),
            }
        })?,
    };
    build_query(&value)
}

fn schema_err(path: &str, message: impl Into<String>) -> QueryError {
    QueryError::Schema {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn expect_string(value: &ConfigValue, path: &str) -> Result<String, QueryError> {
    value
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| schema_err(path, format!("expected a string, found {}", value.type_name())))
}

fn build_query(value: &ConfigValue) -> Result<Query, QueryError> {
    let entries = value
        .as_object()
        .ok_or_else(|| schema_err("$", format!("expected a query object, found {}", value.type_name())))?;

    let mut url = None;
    let mut steps = None;
    for (key, val) in entries {
        match key.as_str() {
            "@url" => url = Some(expect_string(val, "$.@url")?),
            "@steps" => steps = Some(build_steps(val, "$.@steps")?),
            other => {
                return Err(unknown_key_error("$", other, &["@url", "@steps"]));
            }
        }
    }

    let url = url.ok_or_else(|| schema_err("$", "missing required keyword `@url`"))?;
    let steps = steps.ok_or_else(|| schema_err("$", "missing required keyword `@steps`"))?;
    Ok(Query { url, steps })
}

fn build_steps(value: &ConfigValue, path: &str) -> Result<Vec<Step>, QueryError> {
    let items = value
        .as_array()
        .ok_or_else(|| schema_err(path, format!("expected an array of steps, found {}", value.type_name())))?;
    if items.is_empty() {
        return Err(schema_err(path, "steps must not be empty"));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, item)| build_step(item, &format!("{}[{}]", path, i)))
        .collect()
}

fn build_step(value: &ConfigValue, path: &str) -> Result<Step, QueryError> {
    let entries = value
        .as_object()
        .ok_or_else(|| schema_err(path, format!("expected a step object, found {}", value.type_name())))?;

    let mut step = Step::new(String::new());
    let mut saw_xpath = false;
    for (key, val) in entries {
        let key_path = format!("{}.{}", path, key);
        match key.as_str() {
            "@xpath" => {
                step.xpath = expect_string(val, &key_path)?;
                saw_xpath = true;
            }
            "@name" => step.name = Some(expect_string(val, &key_path)?),
            "@fields" => step.fields = Some(build_fields(val, &key_path)?),
            "@follow" => step.follow = Some(build_follow(val, &key_path)?),
            "@pagination" => step.pagination = Some(build_pagination(val, &key_path)?),
            other => {
                return Err(unknown_key_error(
                    path,
                    other,
                    &["@xpath", "@name", "@fields", "@follow", "@pagination"],
                ));
            }
        }
    }

    if !saw_xpath {
        return Err(schema_err(path, "missing required keyword `@xpath`"));
    }
    Ok(step)
}

fn build_fields(value: &ConfigValue, path: &str) -> Result<Vec<(String, String)>, QueryError> {
    let entries = value
        .as_object()
        .ok_or_else(|| schema_err(path, format!("expected a field map, found {}", value.type_name())))?;
    let mut fields = Vec::with_capacity(entries.len());
    for (key, val) in entries {
        if key.starts_with('@') {
            return Err(schema_err(
                path,
                format!("field name `{}` must not start with the reserved prefix `@`", key),
            ));
        }
        if fields.iter().any(|(k, _)| k == key) {
            return Err(schema_err(path, format!("duplicate field name `{}`", key)));
        }
        fields.push((key.clone(), expect_string(val, &format!("{}.{}", path, key))?));
    }
    Ok(fields)
}

fn build_follow(value: &ConfigValue, path: &str) -> Result<FollowSpec, QueryError> {
    let entries = value
        .as_object()
        .ok_or_else(|| schema_err(path, format!("expected a follow object, found {}", value.type_name())))?;

    let mut xpath = None;
    let mut steps = None;
    for (key, val) in entries {
        match key.as_str() {
            "@xpath" => xpath = Some(expect_string(val, &format!("{}.@xpath", path))?),
            "@steps" => steps = Some(build_steps(val, &format!("{}.@steps", path))?),
            other => return Err(unknown_key_error(path, other, &["@xpath", "@steps"])),
        }
    }

    Ok(FollowSpec {
        xpath: xpath.ok_or_else(|| schema_err(path, "missing required keyword `@xpath`"))?,
        steps: steps.ok_or_else(|| schema_err(path, "missing required keyword `@steps`"))?,
    })
}

fn build_pagination(value: &ConfigValue, path: &str) -> Result<PaginationSpec, QueryError> {
    let entries = value
        .as_object()
        .ok_or_else(|| schema_err(path, format!("expected a pagination object, found {}", value.type_name())))?;

    let mut xpath = None;
    let mut limit = None;
    for (key, val) in entries {
        match key.as_str() {
            "@xpath" => xpath = Some(expect_string(val, &format!("{}.@xpath", path))?),
            "@limit" => match val {
                ConfigValue::Int(n) => limit = Some(*n),
                other => {
                    return Err(schema_err(
                        &format!("{}.@limit", path),
                        format!("expected an integer, found {}", other.type_name()),
                    ))
                }
            },
            other => return Err(unknown_key_error(path, other, &["@xpath", "@limit"])),
        }
    }

    Ok(PaginationSpec {
        xpath: xpath.ok_or_else(|| schema_err(path, "missing required keyword `@xpath`"))?,
        limit: limit.ok_or_else(|| schema_err(path, "missing required keyword `@limit`"))?,
    })
}

fn unknown_key_error(path: &str, key: &str, expected: &[&str]) -> QueryError {
    let kind = if key.starts_with('@') {
        "unknown keyword"
    } else {
        "unexpected key"
    };
    schema_err(
        path,
        format!("{} `{}` (expected one of: {})", kind, key, expected.join(", ")),
    )
}
