//! Subset of GXL: one `graph` element with `node id=..` and
//! `edge from=.. to=..` children. The first `attr` child of a node or edge
//! supplies its label (`_` when absent); further attributes are ignored with
//! a warning.

use std::collections::HashMap;

use roxmltree::{Document, Node};

use super::ParseError;
use crate::model::LabeledGraph;

pub const DEFAULT_LABEL: &str = "_";

#[derive(Debug, Clone, PartialEq)]
pub struct GxlGraph {
    pub graph: LabeledGraph,
    pub warnings: Vec<String>,
}

fn line_of(doc: &Document<'_>, node: Node<'_, '_>) -> usize {
    doc.text_pos_at(node.range().start).row as usize
}

fn label_of(doc: &Document<'_>, node: Node<'_, '_>, what: &str, warnings: &mut Vec<String>) -> String {
    let attrs: Vec<Node<'_, '_>> = node.children().filter(|c| c.has_tag_name("attr")).collect();
    let Some(first) = attrs.first() else { return DEFAULT_LABEL.to_string() };
    if attrs.len() > 1 {
        let ignored: Vec<&str> = attrs[1..].iter().filter_map(|a| a.attribute("name")).collect();
        warnings.push(format!(
            "line {}: {what} has {} attributes; using `{}`, ignoring {}",
            line_of(doc, node),
            attrs.len(),
            first.attribute("name").unwrap_or("?"),
            ignored.join(", ")
        ));
    }
    let text: String = first
        .descendants()
        .filter(|d| d.is_text())
        .filter_map(|d| d.text())
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_");
    if text.is_empty() {
        DEFAULT_LABEL.to_string()
    } else {
        text
    }
}

/// Parses a GXL document. `fallback_id` names the graph when it has no id.
pub fn parse_gxl_subset(input: &str, fallback_id: &str) -> Result<GxlGraph, ParseError> {
    let doc = Document::parse(input).map_err(|e| ParseError::Xml(e.to_string()))?;
    let mut graphs = doc.descendants().filter(|n| n.has_tag_name("graph"));
    let graph = graphs.next().ok_or_else(|| ParseError::Xml("no graph element".into()))?;
    if graphs.next().is_some() {
        return Err(ParseError::Xml("more than one graph element".into()));
    }
    let mut warnings = Vec::new();
    let id = graph.attribute("id").unwrap_or(fallback_id).to_string();

    let mut index = HashMap::new();
    let mut labels = Vec::new();
    for node in graph.children().filter(|c| c.has_tag_name("node")) {
        let line = line_of(&doc, node);
        let node_id = node.attribute("id").ok_or_else(|| ParseError::MissingId {
            line,
            element: "node".into(),
            attribute: "id".into(),
        })?;
        if index.insert(node_id, labels.len()).is_some() {
            return Err(ParseError::DuplicateNode { line, node: labels.len() + 1 });
        }
        labels.push(label_of(&doc, node, &format!("node {node_id}"), &mut warnings));
    }

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for edge in graph.children().filter(|c| c.has_tag_name("edge")) {
        let line = line_of(&doc, edge);
        let endpoint = |attribute: &str| -> Result<usize, ParseError> {
            let name = edge.attribute(attribute).ok_or_else(|| ParseError::MissingId {
                line,
                element: "edge".into(),
                attribute: attribute.into(),
            })?;
            index.get(name).copied().ok_or_else(|| ParseError::UnknownNode { line, node: name.into() })
        };
        let (a, b) = (endpoint("from")?, endpoint("to")?);
        if a == b {
            return Err(ParseError::SelfLoop { line, node: a + 1 });
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(ParseError::DuplicateEdge { line, i: a + 1, j: b + 1 });
        }
        edges.push((a, b, label_of(&doc, edge, &format!("edge {}-{}", a + 1, b + 1), &mut warnings)));
    }
    let graph = LabeledGraph::new(id, labels, edges).expect("edges checked while parsing");
    Ok(GxlGraph { graph, warnings })
}
