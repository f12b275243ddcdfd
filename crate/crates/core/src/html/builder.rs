//! Tree construction from the token stream: implied html/head/body scaffolding
//! and the common auto-close rules, mirroring mainstream parser output for
//! everyday markup.

use url::Url;

use super::{tokenize, Document, NodeData, NodeId, Token};

const VOID_ELEMENTS: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source",
    "track", "wbr",
];

/// Start tags that close an open `p` element first.
const CLOSES_P: &[&str] = &[
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div",
    "dl", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section",
    "summary", "table", "ul", "li", "dt", "dd",
];

/// Elements that belong in `head` while no body content has been seen.
const HEAD_ELEMENTS: &[&str] = &["base", "link", "meta", "title", "style", "script", "noscript"];

#[derive(PartialEq)]
enum Stage {
    BeforeHtml,
    BeforeHead,
    InHead,
    AfterHead,
    InBody,
}

struct Builder {
    doc: Document,
    stack: Vec<NodeId>,
    stage: Stage,
    html: Option<NodeId>,
    head: Option<NodeId>,
    saw_doctype: bool,
}

pub fn build(input: &str, base_url: Url) -> Document {
    let tokens = tokenize(input);
    let mut b = Builder {
        doc: Document::new(base_url),
        stack: Vec::new(),
        stage: Stage::BeforeHtml,
        html: None,
        head: None,
        saw_doctype: false,
    };
    for token in tokens {
        b.process(token);
    }
    b.ensure_body();
    b.doc
}

impl Builder {
    fn process(&mut self, token: Token) {
        match token {
            Token::Doctype(name) => {
                if !self.saw_doctype && self.html.is_none() {
                    self.doc.push_node(0, NodeData::Doctype(name));
                    self.saw_doctype = true;
                }
            }
            Token::Comment(data) => {
                let parent = self.current();
                self.doc.push_node(parent, NodeData::Comment(data));
            }
            Token::Text(text) => self.text(&text),
            Token::StartTag { name, attrs, .. } => self.start_tag(&name, attrs),
            Token::EndTag { name } => self.end_tag(&name),
        }
    }

    fn current(&self) -> NodeId {
        self.stack.last().copied().unwrap_or(0)
    }

    fn ensure_html(&mut self) -> NodeId {
        if let Some(html) = self.html {
            return html;
        }
        let html = self.doc.push_node(
            0,
            NodeData::Element {
                name: "html".to_owned(),
                attrs: Vec::new(),
            },
        );
        self.html = Some(html);
        self.stack.push(html);
        self.stage = Stage::BeforeHead;
        html
    }

    fn ensure_head(&mut self) -> NodeId {
        if let Some(head) = self.head {
            return head;
        }
        let html = self.ensure_html();
        let head = self.doc.push_node(
            html,
            NodeData::Element {
                name: "head".to_owned(),
                attrs: Vec::new(),
            },
        );
        self.head = Some(head);
        head
    }

    fn close_head(&mut self) {
        if self.stage == Stage::InHead {
            let html = self.html.expect("head implies html");
            while self.current() != html {
                self.stack.pop();
            }
            self.stage = Stage::AfterHead;
        }
    }

    fn ensure_body(&mut self) -> NodeId {
        if self.stage == Stage::InBody {
            // Body is the lowest of stack[2..]; find it from the bottom.
            return self.stack.get(1).copied().unwrap_or_else(|| self.current());
        }
        let html = self.ensure_html();
        if self.head.is_none() {
            self.ensure_head();
        }
        self.close_head();
        let body = self.doc.push_node(
            html,
            NodeData::Element {
                name: "body".to_owned(),
                attrs: Vec::new(),
            },
        );
        self.stack.truncate(1); // keep html
        self.stack.push(body);
        self.stage = Stage::InBody;
        body
    }

    fn text(&mut self, text: &str) {
        match self.stage {
            Stage::InBody => {
                let parent = self.current();
                self.doc.append_text(parent, text);
            }
            Stage::InHead => {
                let parent = self.current();
                self.doc.append_text(parent, text);
            }
            Stage::BeforeHtml | Stage::BeforeHead => {
                // Leading whitespace is dropped before any structure exists.
                let rest = text.trim_start();
                if !rest.is_empty() {
                    let rest = rest.to_owned();
                    self.ensure_body();
                    self.doc.append_text(self.current(), &rest);
                }
            }
            Stage::AfterHead => {
                // Whitespace between </head> and <body> stays under <html>.
                let split = text
                    .find(|c: char| !c.is_whitespace())
                    .unwrap_or(text.len());
                let (ws, rest) = text.split_at(split);
                if !ws.is_empty() {
                    let html = self.html.expect("after head implies html");
                    self.doc.append_text(html, ws);
                }
                if !rest.is_empty() {
                    let rest = rest.to_owned();
                    self.ensure_body();
                    self.doc.append_text(self.current(), &rest);
                }
            }
        }
    }

    fn start_tag(&mut self, name: &str, attrs: Vec<(String, String)>) {
        match name {
            "html" => {
                let html = self.ensure_html();
                self.doc.merge_attrs(html, &attrs);
            }
            "head" => {
                if self.head.is_none() {
                    self.ensure_html();
                    let head = self.ensure_head();
                    self.doc.merge_attrs(head, &attrs);
                    self.stack.push(head);
                    self.stage = Stage::InHead;
                }
            }
            "body" => {
                let body = self.ensure_body();
                self.doc.merge_attrs(body, &attrs);
            }
            _ if HEAD_ELEMENTS.contains(&name)
                && matches!(self.stage, Stage::BeforeHtml | Stage::BeforeHead | Stage::InHead) =>
            {
                self.ensure_html();
                let head = self.ensure_head();
                let parent = if self.stage == Stage::InHead {
                    self.current()
                } else {
                    head
                };
                let node = self.doc.push_node(
                    parent,
                    NodeData::Element {
                        name: name.to_owned(),
                        attrs,
                    },
                );
                if !VOID_ELEMENTS.contains(&name) {
                    // Raw-text head elements carry their text as children;
                    // the matching end tag pops them.
                    let was_before = self.stage != Stage::InHead;
                    if was_before {
                        self.stack.push(head);
                        self.stage = Stage::InHead;
                    }
                    self.stack.push(node);
                }
            }
            _ => {
                self.ensure_body();
                self.auto_close_for(name);
                let parent = self.current();
                let node = self.doc.push_node(
                    parent,
                    NodeData::Element {
                        name: name.to_owned(),
                        attrs,
                    },
                );
                if !VOID_ELEMENTS.contains(&name) {
                    self.stack.push(node);
                }
            }
        }
    }

    /// Implied end tags: a new block closes an open `p`; repeated
    /// `li`/`dt`/`dd`/`option`/`tr`/`td`/`th` close their predecessors.
    fn auto_close_for(&mut self, name: &str) {
        if CLOSES_P.contains(&name) {
            self.close_in_scope("p", &["body", "html", "table", "td", "th", "caption"]);
        }
        match name {
            "li" => self.close_in_scope("li", &["ul", "ol", "body", "html"]),
            "dt" | "dd" => {
                self.close_in_scope("dt", &["dl", "body", "html"]);
                self.close_in_scope("dd", &["dl", "body", "html"]);
            }
            "option" => self.close_in_scope("option", &["select", "body", "html"]),
            "tr" => {
                self.close_in_scope("td", &["table", "body", "html"]);
                self.close_in_scope("th", &["table", "body", "html"]);
                self.close_in_scope("tr", &["table", "body", "html"]);
            }
            "td" | "th" => {
                self.close_in_scope("td", &["tr", "table", "body", "html"]);
                self.close_in_scope("th", &["tr", "table", "body", "html"]);
            }
            _ => {}
        }
    }

    /// Pops through the nearest open `target`, unless a scope boundary is
    /// reached first.
    fn close_in_scope(&mut self, target: &str, boundaries: &[&str]) {
        let mut found = None;
        for (i, &id) in self.stack.iter().enumerate().rev() {
            match self.doc.element_name(id) {
                Some(n) if n == target => {
                    found = Some(i);
                    break;
                }
                Some(n) if boundaries.contains(&n) => break,
                _ => {}
            }
        }
        if let Some(i) = found {
            self.stack.truncate(i);
        }
    }

    fn end_tag(&mut self, name: &str) {
        match name {
            "html" | "body" => {
                // Ignored: trailing content still lands in body.
                self.ensure_body();
            }
            "head" => {
                self.close_head();
            }
            "br" => {
                // "</br>" acts like "<br>".
                self.start_tag("br", Vec::new());
            }
            "p" if !self.has_open("p") => {
                // "</p>" with no open p inserts an empty one.
                self.ensure_body();
                let parent = self.current();
                self.doc.push_node(
                    parent,
                    NodeData::Element {
                        name: "p".to_owned(),
                        attrs: Vec::new(),
                    },
                );
            }
            _ => {
                let mut found = None;
                for (i, &id) in self.stack.iter().enumerate().rev() {
                    match self.doc.element_name(id) {
                        Some(n) if n == name => {
                            found = Some(i);
                            break;
                        }
                        Some("html") | Some("body") => break,
                        _ => {}
                    }
                }
                if let Some(i) = found {
                    self.stack.truncate(i);
                    if self.stage == Stage::InHead && !self.stack.iter().any(|&id| Some(id) == self.head)
                    {
                        self.stage = Stage::AfterHead;
                    }
                }
                // Unmatched end tags are ignored.
            }
        }
    }

    fn has_open(&self, name: &str) -> bool {
        self.stack
            .iter()
            .any(|&id| self.doc.element_name(id) == Some(name))
    }
}
