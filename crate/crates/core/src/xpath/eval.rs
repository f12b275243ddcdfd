//! Evaluation of parsed expressions against a document tree.

use crate::html::{Document, NodeData, NodeRef};

use super::ast::*;

/// The value a field extraction produces: no match collapses to null, a
/// single match to a string, several matches to an array of strings.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtractedValue {
    Null,
    String(String),
    Strings(Vec<String>),
}

impl ExtractedValue {
    fn from_values(mut values: Vec<String>) -> ExtractedValue {
        match values.len() {
            0 => ExtractedValue::Null,
            1 => ExtractedValue::String(values.pop().expect("len checked")),
            _ => ExtractedValue::Strings(values),
        }
    }

    /// The first string, for expressions expected to yield one URL.
    pub fn first(&self) -> Option<&str> {
        match self {
            ExtractedValue::Null => None,
            ExtractedValue::String(s) => Some(s),
            ExtractedValue::Strings(v) => v.first().map(String::as_str),
        }
    }
}

/// Evaluates a path from `context`, returning matches in document order with
/// duplicates removed.
pub fn select(doc: &Document, context: NodeRef, path: &Path) -> Vec<NodeRef> {
    let mut current: Vec<NodeRef> = if path.absolute {
        vec![doc.root_ref()]
    } else {
        vec![context]
    };
    for step in &path.steps {
        let mut next: Vec<NodeRef> = Vec::new();
        for &node in &current {
            let candidates = axis_candidates(doc, node, step);
            let filtered = apply_predicates(doc, candidates, &step.predicates);
            next.extend(filtered);
        }
        sort_document_order(doc, &mut next);
        current = next;
    }
    current
}

/// Evaluates a full extraction expression: path results converted per
/// string-value (whitespace-normalized when the expression ends in
/// `/normalize-space()`), then collapsed by cardinality.
pub fn extract(doc: &Document, context: NodeRef, expr: &Expr) -> ExtractedValue {
    let nodes = select(doc, context, &expr.path);
    let values = nodes
        .into_iter()
        .map(|n| {
            let value = doc.string_value(n);
            if expr.normalize {
                normalize_space(&value)
            } else {
                value
            }
        })
        .collect();
    ExtractedValue::from_values(values)
}

/// XPath 1.0 `normalize-space`: trim, and squeeze internal whitespace runs
/// to single spaces.
pub fn normalize_space(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn sort_document_order(doc: &Document, nodes: &mut Vec<NodeRef>) {
    nodes.sort_by_key(|&n| doc.order_key(n));
    nodes.dedup();
}

fn axis_candidates(doc: &Document, node: NodeRef, step: &PathStep) -> Vec<NodeRef> {
    match step.axis {
        Axis::SelfNode => match node {
            n if test_matches(doc, n, &step.test) => vec![n],
            _ => vec![],
        },
        Axis::Parent => match node {
            NodeRef::Node(id) => doc
                .parent(id)
                .map(NodeRef::Node)
                .filter(|&p| test_matches(doc, p, &step.test))
                .into_iter()
                .collect(),
            NodeRef::Attr(id, _) => vec![NodeRef::Node(id)]
                .into_iter()
                .filter(|&p| test_matches(doc, p, &step.test))
                .collect(),
        },
        Axis::Child => match node {
            NodeRef::Node(id) => doc
                .children(id)
                .iter()
                .map(|&c| NodeRef::Node(c))
                .filter(|&c| test_matches(doc, c, &step.test))
                .collect(),
            NodeRef::Attr(..) => vec![],
        },
        Axis::DescendantOrSelf => match node {
            NodeRef::Node(id) => doc
                .descendants_or_self(id)
                .into_iter()
                .map(NodeRef::Node)
                .filter(|&c| test_matches(doc, c, &step.test))
                .collect(),
            attr @ NodeRef::Attr(..) => {
                if test_matches(doc, attr, &step.test) {
                    vec![attr]
                } else {
                    vec![]
                }
            }
        },
        Axis::Attribute => match node {
            NodeRef::Node(id) => {
                let NodeTest::Name(wanted) = &step.test else {
                    return vec![];
                };
                doc.attrs(id)
                    .iter()
                    .enumerate()
                    .filter(|(_, (k, _))| k == wanted)
                    .map(|(i, _)| NodeRef::Attr(id, i))
                    .collect()
            }
            NodeRef::Attr(..) => vec![],
        },
    }
}

fn test_matches(doc: &Document, node: NodeRef, test: &NodeTest) -> bool {
    let NodeRef::Node(id) = node else {
        // Attribute nodes only appear via the attribute axis, which matches
        // by name directly; AnyNode keeps them for `.`-style steps.
        return matches!(test, NodeTest::AnyNode);
    };
    match test {
        NodeTest::AnyNode => true,
        NodeTest::AnyElement => doc.element_name(id).is_some(),
        NodeTest::Name(name) => doc.element_name(id) == Some(name.as_str()),
        NodeTest::Text => matches!(doc.node(id).data, NodeData::Text(_)),
    }
}

fn apply_predicates(
    doc: &Document,
    candidates: Vec<NodeRef>,
    predicates: &[Predicate],
) -> Vec<NodeRef> {
    let mut current = candidates;
    for predicate in predicates {
        current = current
            .into_iter()
            .enumerate()
            .filter(|(i, node)| match predicate {
                Predicate::Position(n) => (*i as i64) + 1 == *n,
                Predicate::Bool(expr) => eval_bool(doc, *node, expr),
            })
            .map(|(_, node)| node)
            .collect();
    }
    current
}

fn eval_bool(doc: &Document, context: NodeRef, expr: &BoolExpr) -> bool {
    match expr {
        BoolExpr::Or(a, b) => eval_bool(doc, context, a) || eval_bool(doc, context, b),
        BoolExpr::And(a, b) => eval_bool(doc, context, a) && eval_bool(doc, context, b),
        BoolExpr::Equals(a, b) => {
            let left = eval_value(doc, context, a);
            let right = eval_value(doc, context, b);
            values_equal(doc, &left, &right)
        }
        BoolExpr::Truthy(v) => match eval_value(doc, context, v) {
            Value::NodeSet(nodes) => !nodes.is_empty(),
            Value::Str(s) => !s.is_empty(),
        },
    }
}

enum Value {
    NodeSet(Vec<NodeRef>),
    Str(String),
}

fn eval_value(doc: &Document, context: NodeRef, expr: &ValueExpr) -> Value {
    match expr {
        ValueExpr::Literal(s) => Value::Str(s.clone()),
        ValueExpr::Path(path) => Value::NodeSet(select(doc, context, path)),
        ValueExpr::Contains(a, b) => {
            let hay = value_to_string(doc, eval_value(doc, context, a));
            let needle = value_to_string(doc, eval_value(doc, context, b));
            Value::Str(if hay.contains(&needle) {
                "true".to_owned()
            } else {
                String::new()
            })
        }
        ValueExpr::NormalizeSpace(arg) => {
            let base = match arg {
                Some(inner) => value_to_string(doc, eval_value(doc, context, inner)),
                None => doc.string_value(context),
            };
            Value::Str(normalize_space(&base))
        }
    }
}

/// XPath 1.0 string conversion: a node-set converts to the string-value of
/// its first node in document order, or "" when empty.
fn value_to_string(doc: &Document, value: Value) -> String {
    match value {
        Value::Str(s) => s,
        Value::NodeSet(nodes) => nodes
            .first()
            .map(|&n| doc.string_value(n))
            .unwrap_or_default(),
    }
}

/// XPath 1.0 general comparison: node-set operands compare existentially.
fn values_equal(doc: &Document, left: &Value, right: &Value) -> bool {
    match (left, right) {
        (Value::Str(a), Value::Str(b)) => a == b,
        (Value::NodeSet(nodes), Value::Str(s)) | (Value::Str(s), Value::NodeSet(nodes)) => {
            nodes.iter().any(|&n| doc.string_value(n) == *s)
        }
        (Value::NodeSet(a), Value::NodeSet(b)) => {
            let b_values: Vec<String> = b.iter().map(|&n| doc.string_value(n)).collect();
            a.iter().any(|&n| b_values.contains(&doc.string_value(n)))
        }
    }
}
