//! Line-based graph format:
//!
//! ```text
//! # comment
//! graph g1
//! n 2
//! v 1 a
//! v 2 b
//! e 1 2 x
//! ```
//!
//! Indices are 1-based; ids and labels are single tokens. A file may hold
//! several graphs, each starting with a `graph` line.

use std::collections::HashSet;
use std::fmt::Write;

use super::ParseError;
use crate::error::{GedError, Result};
use crate::model::LabeledGraph;

struct Pending {
    id: String,
    line: usize,
    order: Option<usize>,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize, String)>,
    seen: HashSet<(usize, usize)>,
}

impl Pending {
    fn finish(self) -> std::result::Result<LabeledGraph, ParseError> {
        if self.order.is_none() {
            return Err(ParseError::Malformed { line: self.line, reason: format!("graph {} has no `n` line", self.id) });
        }
        let mut labels = Vec::with_capacity(self.labels.len());
        for (i, label) in self.labels.into_iter().enumerate() {
            labels.push(label.ok_or_else(|| ParseError::MissingNode { graph: self.id.clone(), node: i + 1 })?);
        }
        Ok(LabeledGraph::new(self.id, labels, self.edges).expect("edges checked while parsing"))
    }
}

fn index(token: &str, line: usize) -> std::result::Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::Malformed { line, reason: format!("`{token}` is not a non-negative integer") })
}

/// Parses every graph in `input`.
pub fn parse_text_graphs(input: &str) -> std::result::Result<Vec<LabeledGraph>, ParseError> {
    let mut graphs = Vec::new();
    let mut current: Option<Pending> = None;
    for (no, raw) in input.lines().enumerate() {
        let line = no + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else { continue };
        let malformed = |reason: &str| ParseError::Malformed { line, reason: reason.to_string() };
        if keyword == "graph" {
            let [id] = args else { return Err(malformed("expected `graph <id>`")) };
            if let Some(done) = current.take() {
                graphs.push(done.finish()?);
            }
            current = Some(Pending {
                id: id.to_string(),
                line,
                order: None,
                labels: Vec::new(),
                edges: Vec::new(),
                seen: HashSet::new(),
            });
            continue;
        }
        let Some(graph) = current.as_mut() else {
            return Err(malformed("content before the first `graph` line"));
        };
        match keyword {
            "n" => {
                let [count] = args else { return Err(malformed("expected `n <count>`")) };
                if graph.order.is_some() {
                    return Err(malformed("node count declared twice"));
                }
                let count = index(count, line)?;
                graph.order = Some(count);
                graph.labels = vec![None; count];
            }
            "v" | "e" => {
                let Some(order) = graph.order else {
                    return Err(malformed("`n` must precede nodes and edges"));
                };
                if keyword == "v" {
                    let [i, label] = args else { return Err(malformed("expected `v <index> <label>`")) };
                    let node = index(i, line)?;
                    if node == 0 || node > order {
                        return Err(ParseError::NodeOutOfRange { line, node, order });
                    }
                    let slot = &mut graph.labels[node - 1];
                    if slot.is_some() {
                        return Err(ParseError::DuplicateNode { line, node });
                    }
                    *slot = Some(label.to_string());
                } else {
                    let [i, j, label] = args else { return Err(malformed("expected `e <i> <j> <label>`")) };
                    let (i, j) = (index(i, line)?, index(j, line)?);
                    if i == 0 || j == 0 || i > order || j > order {
                        return Err(ParseError::DanglingEdge { line, i, j, order });
                    }
                    if i == j {
                        return Err(ParseError::SelfLoop { line, node: i });
                    }
                    if !graph.seen.insert((i.min(j), i.max(j))) {
                        return Err(ParseError::DuplicateEdge { line, i, j });
                    }
                    graph.edges.push((i - 1, j - 1, label.to_string()));
                }
            }
            other => return Err(malformed(&format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(done) = current {
        graphs.push(done.finish()?);
    }
    Ok(graphs)
}

/// Parses an input holding exactly one graph.
pub fn parse_text_graph(input: &str) -> std::result::Result<LabeledGraph, ParseError> {
    let mut graphs = parse_text_graphs(input)?;
    if graphs.len() != 1 {
        return Err(ParseError::GraphCount(graphs.len()));
    }
    Ok(graphs.pop().expect("one graph"))
}

fn token(kind: &str, value: &str) -> Result<()> {
    if value.is_empty() || value.contains(char::is_whitespace) || value.contains('#') {
        return Err(GedError::InvalidParameter(format!("{kind} `{value}` is not a single token")));
    }
    Ok(())
}

/// Canonical form: nodes in index order, edges sorted by endpoints.
pub fn serialize_text(g: &LabeledGraph) -> Result<String> {
    token("graph id", g.id())?;
    let mut out = format!("graph {}\nn {}\n", g.id(), g.order());
    for (i, label) in g.labels().iter().enumerate() {
        token("label", label)?;
        writeln!(out, "v {} {label}", i + 1).expect("writing to a string");
    }
    for e in g.sorted_edges() {
        token("label", &e.label)?;
        writeln!(out, "e {} {} {}", e.a + 1, e.b + 1, e.label).expect("writing to a string");
    }
    Ok(out)
}

pub fn serialize_text_all(graphs: &[LabeledGraph]) -> Result<String> {
    graphs.iter().map(serialize_text).collect()
}
