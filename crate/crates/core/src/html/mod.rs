//! Lenient HTML parsing into a document tree.
//!
//! Parsing never fails: malformed input produces a best-effort tree following
//! the common HTML5 recovery rules (implied `html`/`head`/`body`, void
//! elements, auto-closing `p`/`li`/`dt`/`dd`/table cells, raw-text elements,
//! bogus comments). Table-specific tree fixups (foster parenting, implied
//! `tbody`) and formatting-element adoption are not applied.

mod builder;
mod entities;
mod tokenizer;

use url::Url;

pub(crate) use tokenizer::{tokenize, Token};

/// Index of a node within its [`Document`] arena. Allocation order is
/// document order (preorder), which selection relies on.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeData {
    Document,
    Doctype(String),
    Element { name: String, attrs: Vec<(String, String)> },
    Text(String),
    Comment(String),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub data: NodeData,
}

/// A parsed HTML document plus the absolute URL it was fetched from, used to
/// resolve relative links found in it.
#[derive(Debug, Clone)]
pub struct Document {
    nodes: Vec<Node>,
    pub base_url: Url,
}

/// A handle to one node within a document: either a tree node or one
/// attribute of an element. Valid for the lifetime of the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Node(NodeId),
    /// `(element, attribute index)`
    Attr(NodeId, usize),
}

impl Document {
    pub(crate) fn new(base_url: Url) -> Document {
        Document {
            nodes: vec![Node {
                parent: None,
                children: Vec::new(),
                data: NodeData::Document,
            }],
            base_url,
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn root_ref(&self) -> NodeRef {
        NodeRef::Node(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn element_name(&self, id: NodeId) -> Option<&str> {
        match &self.nodes[id].data {
            NodeData::Element { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn attrs(&self, id: NodeId) -> &[(String, String)] {
        match &self.nodes[id].data {
            NodeData::Element { attrs, .. } => attrs,
            _ => &[],
        }
    }

    pub fn attr(&self, id: NodeId, name: &str) -> Option<&str> {
        self.attrs(id)
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    /// XPath 1.0 string-value: attribute value, text content, or the
    /// concatenation of all descendant text for elements and the document.
    pub fn string_value(&self, node: NodeRef) -> String {
        match node {
            NodeRef::Attr(id, idx) => self.attrs(id)[idx].1.clone(),
            NodeRef::Node(id) => match &self.nodes[id].data {
                NodeData::Text(text) => text.clone(),
                NodeData::Comment(text) => text.clone(),
                NodeData::Doctype(_) => String::new(),
                NodeData::Document | NodeData::Element { .. } => {
                    let mut out = String::new();
                    self.collect_text(id, &mut out);
                    out
                }
            },
        }
    }

    fn collect_text(&self, id: NodeId, out: &mut String) {
        for &child in &self.nodes[id].children {
            match &self.nodes[child].data {
                NodeData::Text(text) => out.push_str(text),
                NodeData::Element { .. } => self.collect_text(child, out),
                _ => {}
            }
        }
    }

    /// Preorder traversal of `id` and everything below it.
    pub fn descendants_or_self(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(next) = stack.pop() {
            out.push(next);
            for &child in self.nodes[next].children.iter().rev() {
                stack.push(child);
            }
        }
        out
    }

    /// Sort key giving document order: attributes sort directly after their
    /// owner element, before its children.
    pub fn order_key(&self, node: NodeRef) -> (usize, usize) {
        match node {
            NodeRef::Node(id) => (id, 0),
            NodeRef::Attr(id, idx) => (id, idx + 1),
        }
    }

    pub(crate) fn push_node(&mut self, parent: NodeId, data: NodeData) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: Some(parent),
            children: Vec::new(),
            data,
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub(crate) fn append_text(&mut self, parent: NodeId, text: &str) {
        if text.is_empty() {
            return;
        }
        if let Some(&last) = self.nodes[parent].children.last() {
            if let NodeData::Text(existing) = &mut self.nodes[last].data {
                existing.push_str(text);
                return;
            }
        }
        self.push_node(parent, NodeData::Text(text.to_owned()));
    }

    pub(crate) fn merge_attrs(&mut self, id: NodeId, new_attrs: &[(String, String)]) {
        if let NodeData::Element { attrs, .. } = &mut self.nodes[id].data {
            for (k, v) in new_attrs {
                if !attrs.iter().any(|(existing, _)| existing == k) {
                    attrs.push((k.clone(), v.clone()));
                }
            }
        }
    }
}

/// Parses HTML bytes into a tree. The character encoding comes from
/// `declared_charset` (e.g. the HTTP Content-Type), then a `<meta>` sniff of
/// the first kilobyte, then UTF-8 with replacement.
pub fn parse_html(bytes: &[u8], base_url: Url, declared_charset: Option<&str>) -> Document {
    let text = decode(bytes, declared_charset);
    builder::build(&text, base_url)
}

/// Convenience wrapper over [`parse_html`] for string input.
pub fn parse_html_str(text: &str, base_url: Url) -> Document {
    builder::build(text, base_url)
}

fn decode(bytes: &[u8], declared: Option<&str>) -> String {
    let label = declared
        .map(str::to_owned)
        .or_else(|| sniff_meta_charset(bytes))
        .unwrap_or_else(|| "utf-8".to_owned());
    match label.trim().to_ascii_lowercase().as_str() {
        "iso-8859-1" | "latin1" | "latin-1" | "l1" => latin1_decode(bytes, false),
        "windows-1252" | "cp1252" => latin1_decode(bytes, true),
        "us-ascii" | "ascii" | "utf-8" | "utf8" => String::from_utf8_lossy(bytes).into_owned(),
        _ => String::from_utf8_lossy(bytes).into_owned(),
    }
}

fn latin1_decode(bytes: &[u8], cp1252: bool) -> String {
    bytes
        .iter()
        .map(|&b| {
            if cp1252 && (0x80..0xa0).contains(&b) {
                CP1252_HIGH[(b - 0x80) as usize]
            } else {
                b as char
            }
        })
        .collect()
}

// Windows-1252 code points 0x80..0x9F.
const CP1252_HIGH: [char; 32] = [
    '\u{20ac}', '\u{fffd}', '\u{201a}', '\u{0192}', '\u{201e}', '\u{2026}', '\u{2020}', '\u{2021}',
    '\u{02c6}', '\u{2030}', '\u{0160}', '\u{2039}', '\u{0152}', '\u{fffd}', '\u{017d}', '\u{fffd}',
    '\u{fffd}', '\u{2018}', '\u{2019}', '\u{201c}', '\u{201d}', '\u{2022}', '\u{2013}', '\u{2014}',
    '\u{02dc}', '\u{2122}', '\u{0161}', '\u{203a}', '\u{0153}', '\u{fffd}', '\u{017e}', '\u{0178}',
];

fn sniff_meta_charset(bytes: &[u8]) -> Option<String> {
    let window = &bytes[..bytes.len().min(1024)];
    let text = String::from_utf8_lossy(window).to_ascii_lowercase();
    let idx = text.find("charset")?;
    let rest = &text[idx + "charset".len()..];
    let rest = rest.trim_start();
    let rest = rest.strip_prefix('=')?.trim_start();
    let rest = rest.strip_prefix(['"', '\'']).unwrap_or(rest);
    let end = rest
        .find(|c: char| c == '"' || c == '\'' || c == '>' || c == ';' || c.is_whitespace())
        .unwrap_or(rest.len());
    let label = rest[..end].trim();
    if label.is_empty() {
        None
    } else {
        Some(label.to_owned())
    }
}
