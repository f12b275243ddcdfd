//! Shared XPath differential harness: evaluates the expression corpus with
//! both the engine and an independent XPath 1.0 implementation (sxd-xpath
//! over an XML parse of the same markup) and asserts agreement.

use super::{CONTEXT_CORPUS, EXPRESSION_CORPUS};

use sxd_document::dom as xml_dom;
use sxd_document::Package;
use sxd_xpath::nodeset::Node as XmlNode;
use sxd_xpath::{Context, Factory, Value as XmlValue};
use url::Url;
use webquery::html::{Document, NodeData, NodeRef};
use webquery::xpath::{extract_str, select_str, ExtractedValue};

// --- canonical node paths -------------------------------------------------

fn my_path(doc: &Document, node: NodeRef) -> String {
    match node {
        NodeRef::Attr(id, idx) => {
            let name = &doc.attrs(id)[idx].0;
            format!("{}/@{}", my_path(doc, NodeRef::Node(id)), name)
        }
        NodeRef::Node(id) => {
            let node_data = &doc.node(id).data;
            match node_data {
                NodeData::Document => String::new(),
                NodeData::Element { name, .. } => {
                    let parent = doc.parent(id).expect("elements have parents");
                    let position = doc
                        .children(parent)
                        .iter()
                        .filter(|&&sib| doc.element_name(sib) == Some(name.as_str()))
                        .position(|&sib| sib == id)
                        .expect("node is its parent's child")
                        + 1;
                    format!(
                        "{}/{}[{}]",
                        my_path(doc, NodeRef::Node(parent)),
                        name,
                        position
                    )
                }
                NodeData::Text(_) => {
                    let parent = doc.parent(id).expect("text has a parent");
                    let position = doc
                        .children(parent)
                        .iter()
                        .filter(|&&sib| matches!(doc.node(sib).data, NodeData::Text(_)))
                        .position(|&sib| sib == id)
                        .expect("node is its parent's child")
                        + 1;
                    format!("{}/text()[{}]", my_path(doc, NodeRef::Node(parent)), position)
                }
                other => format!("{:?}", other),
            }
        }
    }
}

fn xml_path(node: XmlNode) -> String {
    match node {
        XmlNode::Root(_) => String::new(),
        XmlNode::Element(e) => {
            let name = e.name().local_part().to_owned();
            let position = match e.parent() {
                Some(xml_dom::ParentOfChild::Root(root)) => {
                    1 + root
                        .children()
                        .iter()
                        .take_while(|c| match c {
                            xml_dom::ChildOfRoot::Element(other) => *other != e,
                            _ => true,
                        })
                        .filter(|c| matches!(c, xml_dom::ChildOfRoot::Element(other) if other.name().local_part() == name))
                        .count()
                }
                Some(xml_dom::ParentOfChild::Element(parent)) => {
                    let mut position = 0;
                    for child in parent.children() {
                        if let xml_dom::ChildOfElement::Element(other) = child {
                            if other.name().local_part() == name {
                                position += 1;
                            }
                            if other == e {
                                break;
                            }
                        }
                    }
                    position
                }
                None => 1,
            };
            let parent_path = match e.parent() {
                Some(xml_dom::ParentOfChild::Element(parent)) => xml_path(XmlNode::Element(parent)),
                _ => String::new(),
            };
            format!("{}/{}[{}]", parent_path, name, position)
        }
        XmlNode::Text(t) => {
            let parent = t.parent().expect("text has a parent");
            let mut position = 0;
            for child in parent.children() {
                if let xml_dom::ChildOfElement::Text(other) = child {
                    position += 1;
                    if other == t {
                        break;
                    }
                }
            }
            format!("{}/text()[{}]", xml_path(XmlNode::Element(parent)), position)
        }
        XmlNode::Attribute(a) => {
            let parent = a.parent().expect("attribute has an owner");
            format!(
                "{}/@{}",
                xml_path(XmlNode::Element(parent)),
                a.name().local_part()
            )
        }
        other => format!("{:?}", other),
    }
}

// --- oracle evaluation ------------------------------------------------------

struct Oracle<'d> {
    document: xml_dom::Document<'d>,
    factory: Factory,
    context: Context<'d>,
}

impl<'d> Oracle<'d> {
    fn new(document: xml_dom::Document<'d>) -> Oracle<'d> {
        Oracle {
            document,
            factory: Factory::new(),
            context: Context::new(),
        }
    }

    fn select(&self, context_node: XmlNode<'d>, expr: &str) -> Vec<XmlNode<'d>> {
        let plain = expr.strip_suffix("/normalize-space()").unwrap_or(expr);
        let xpath = self
            .factory
            .build(plain)
            .expect("oracle parse")
            .expect("oracle expression");
        match xpath.evaluate(&self.context, context_node).expect("oracle eval") {
            XmlValue::Nodeset(set) => set.document_order(),
            other => panic!("{}: oracle returned non-nodeset {:?}", expr, other),
        }
    }

    fn extract(&self, context_node: XmlNode<'d>, expr: &str) -> ExtractedValue {
        let normalize = expr.ends_with("/normalize-space()");
        let nodes = self.select(context_node, expr);
        let values: Vec<String> = nodes
            .into_iter()
            .map(|n| {
                let value = n.string_value();
                if normalize {
                    value.split_whitespace().collect::<Vec<_>>().join(" ")
                } else {
                    value
                }
            })
            .collect();
        match values.len() {
            0 => ExtractedValue::Null,
            1 => ExtractedValue::String(values.into_iter().next().unwrap()),
            _ => ExtractedValue::Strings(values),
        }
    }

    fn root(&self) -> XmlNode<'d> {
        XmlNode::Root(self.document.root())
    }
}

// --- harness ---------------------------------------------------------------

/// Fixture HTML is XHTML-shaped already; the oracle additionally needs the
/// doctype dropped and numeric/predefined references it should not see
/// decoded, so both sides observe identical text.
pub fn html_to_xml(input: &str) -> String {
    let mut out = String::new();
    for line in input.lines() {
        if line.trim_start().to_ascii_lowercase().starts_with("<!doctype") {
            continue;
        }
        out.push_str(line);
        out.push('\n');
    }
    out.replace("&#x25b6;", "\u{25b6}")
        .replace("&gt;", ">")
        .replace("<meta charset=\"utf-8\">", "<meta charset=\"utf-8\"/>")
}

pub fn compare_on_document(label: &str, html: &str, xml: &str) -> usize {
    let mine = webquery::html::parse_html_str(html, Url::parse("https://fixture.test/").unwrap());
    let package: Package = sxd_document::parser::parse(xml)
        .unwrap_or_else(|e| panic!("{}: oracle XML parse failed: {}", label, e));
    let oracle = Oracle::new(package.as_document());

    // Pair up context nodes via canonical paths.
    let mut contexts: Vec<(NodeRef, XmlNode)> = vec![(mine.root_ref(), oracle.root())];
    for container in CONTEXT_CORPUS {
        let my_nodes = select_str(&mine, mine.root_ref(), container).expect("dialect parse");
        let oracle_nodes = oracle.select(oracle.root(), container);
        let my_paths: Vec<String> = my_nodes.iter().map(|&n| my_path(&mine, n)).collect();
        let oracle_paths: Vec<String> = oracle_nodes.iter().map(|&n| xml_path(n)).collect();
        assert_eq!(
            my_paths, oracle_paths,
            "{}: container `{}` node-sets disagree",
            label, container
        );
        contexts.extend(
            my_nodes
                .into_iter()
                .zip(oracle_nodes)
                .take(6),
        );
    }

    let mut comparisons = 0;
    for (my_ctx, oracle_ctx) in &contexts {
        for expr in EXPRESSION_CORPUS {
            let my_nodes = select_str(&mine, *my_ctx, expr).expect("dialect parse");
            let oracle_nodes = oracle.select(*oracle_ctx, expr);
            let my_paths: Vec<String> = my_nodes.iter().map(|&n| my_path(&mine, n)).collect();
            let oracle_paths: Vec<String> = oracle_nodes.iter().map(|&n| xml_path(n)).collect();
            assert_eq!(
                my_paths,
                oracle_paths,
                "{}: select `{}` from {} disagrees",
                label,
                expr,
                my_path(&mine, *my_ctx)
            );

            let my_value = extract_str(&mine, *my_ctx, expr).expect("dialect parse");
            let oracle_value = oracle.extract(*oracle_ctx, expr);
            assert_eq!(
                my_value,
                oracle_value,
                "{}: extract `{}` from {} disagrees",
                label,
                expr,
                my_path(&mine, *my_ctx)
            );
            comparisons += 2;
        }
    }
    comparisons
}

// --- generated documents ----------------------------------------------------

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn pick<'a>(&mut self, pool: &[&'a str]) -> &'a str {
        pool[self.below(pool.len())]
    }
}

const CLASS_POOL: &[&str] = &[
    "thread",
    "teaser",
    "meta",
    "search-result",
    "items-baseline",
    "rating",
    "distance",
    "profile-image",
    "profile featured",
    "review",
    "next",
    "card wide",
    "top rating",
];

const ID_POOL: &[&str] = &["reviews", "main", "sidebar", "x1"];
const WORD_POOL: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "R: 82 / I: 14", "About Me", "My Experience", "4.9",
    "0.4 miles", "view profile",
];
/// Tags an element may contain without tripping HTML5 auto-close or
/// formatting-reconstruction rules, which an XML parse would not replay
/// (no p/li/heading nesting, no anchors inside anchors).
fn child_tags(parent: &str, in_anchor: bool) -> &'static [&'static str] {
    match parent {
        "ul" => &["li"],
        "a" => &["span"],
        "p" | "h3" | "span" => {
            if in_anchor {
                &["span"]
            } else {
                &["span", "a"]
            }
        }
        _ => {
            if in_anchor {
                &["div", "span", "p", "h3", "ul"]
            } else {
                &["div", "span", "p", "a", "h3", "ul"]
            }
        }
    }
}

fn generate_element(rng: &mut Rng, tag: &str, depth: usize, in_anchor: bool, out: &mut String) {
    out.push('<');
    out.push_str(tag);
    if rng.below(10) < 7 {
        out.push_str(&format!(" class=\"{}\"", rng.pick(CLASS_POOL)));
    }
    if rng.below(10) < 2 {
        out.push_str(&format!(" id=\"{}\"", rng.pick(ID_POOL)));
    }
    if tag == "a" {
        out.push_str(&format!(" href=\"/page/{}\"", rng.below(50)));
    }
    out.push('>');
    if rng.below(10) < 3 && tag != "ul" {
        // Self-closed img children exercise void handling in both parsers.
        out.push_str(&format!(
            "<img src=\"/img/{}.jpg\" alt=\"{}\"/>",
            rng.below(30),
            rng.pick(WORD_POOL)
        ));
    }
    let children = if depth >= 3 { 0 } else { rng.below(4) };
    if children == 0 {
        if tag != "ul" {
            out.push_str(rng.pick(WORD_POOL));
        }
    } else {
        let pool = child_tags(tag, in_anchor);
        for _ in 0..children {
            if rng.below(10) < 3 && tag != "ul" {
                out.push_str(rng.pick(WORD_POOL));
                out.push(' ');
            }
            let child = rng.pick(pool);
            generate_element(rng, child, depth + 1, in_anchor || tag == "a", out);
        }
    }
    out.push_str(&format!("</{}>", tag));
}

pub fn generate_document(seed: u64) -> String {
    let mut rng = Rng(seed);
    let mut body = String::new();
    let top_level = 2 + rng.below(5);
    for _ in 0..top_level {
        let tag = rng.pick(&["div", "p", "ul", "h3", "span", "a"]);
        generate_element(&mut rng, tag, 0, false, &mut body);
        body.push('\n');
    }
    format!("<html><head></head><body>\n{}</body></html>\n", body)
}

