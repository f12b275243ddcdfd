//! Parsed form of the supported XPath dialect.

/// A full expression: a location path, optionally ending in
/// `/normalize-space()` which maps each resulting node to its
/// whitespace-normalized string-value.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub path: Path,
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    /// True when the path starts with `/` or `//`: evaluation begins at the
    /// document root rather than the context node.
    pub absolute: bool,
    pub steps: Vec<PathStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathStep {
    pub axis: Axis,
    pub test: NodeTest,
    pub predicates: Vec<Predicate>,
}

impl PathStep {
    pub fn new(axis: Axis, test: NodeTest) -> PathStep {
        PathStep {
            axis,
            test,
            predicates: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Child,
    /// The expansion of `//`: descendant-or-self::node().
    DescendantOrSelf,
    SelfNode,
    Parent,
    Attribute,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeTest {
    /// Element (or attribute) name.
    Name(String),
    /// `*`: any element.
    AnyElement,
    /// `text()`.
    Text,
    /// `node()`-like wildcard, used internally by `//`, `.` and `..`.
    AnyNode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// `[n]`: keep the n-th candidate (1-based) of each context node.
    Position(i64),
    Bool(BoolExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoolExpr {
    Or(Box<BoolExpr>, Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Equals(ValueExpr, ValueExpr),
    /// A lone operand: node-sets test non-empty, strings test non-empty.
    Truthy(ValueExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueExpr {
    Literal(String),
    Path(Path),
    Contains(Box<ValueExpr>, Box<ValueExpr>),
    /// `normalize-space(expr)` or argument-less `normalize-space()`.
    NormalizeSpace(Option<Box<ValueExpr>>),
}
