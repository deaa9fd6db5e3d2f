//! Labeled graphs, node maps, edit costs and the cost of the edit path a
//! node map induces.

mod costs;
mod graph;
mod node_map;

pub use costs::{CostSection, CostTable, EditCostModel, SubEntry};
pub use graph::{Edge, LabeledGraph};
pub use node_map::{Assignment, NodeMap};

use crate::error::{GedError, Result};

/// True iff `pi` is a node map between `g` and `h`.
pub fn validate_node_map(g: &LabeledGraph, h: &LabeledGraph, pi: &NodeMap) -> bool {
    pi.is_consistent(g.order(), h.order())
}

/// Cost of the edit path induced by `pi`, without touching its cache.
pub fn edit_path_cost(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    costs: &EditCostModel,
) -> Result<f64> {
    if !validate_node_map(g, h, pi) {
        return Err(GedError::InvalidNodeMap(format!(
            "map over {}x{} nodes is not a node map between {} ({} nodes) and {} ({} nodes)",
            pi.source_count(),
            pi.target_count(),
            g.id(),
            g.order(),
            h.id(),
            h.order()
        )));
    }
    Ok(edit_path_cost_unchecked(g, h, pi, costs))
}

/// Computes the induced cost and stores it in the map's cache.
pub fn induced_cost(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &mut NodeMap,
    costs: &EditCostModel,
) -> Result<f64> {
    let cost = edit_path_cost(g, h, pi, costs)?;
    pi.set_cached_cost(cost);
    Ok(cost)
}

pub(crate) fn edit_path_cost_unchecked(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    costs: &EditCostModel,
) -> f64 {
    let mut total = 0.0;
    for (i, target) in pi.forward().iter().enumerate() {
        total += match *target {
            Some(k) => costs.node_sub(g.label(i), h.label(k)),
            None => costs.node_del(g.label(i)),
        };
    }
    for (k, source) in pi.backward().iter().enumerate() {
        if source.is_none() {
            total += costs.node_ins(h.label(k));
        }
    }
    for e in g.edges() {
        let image = match (pi.target(e.a), pi.target(e.b)) {
            (Some(k), Some(l)) => h.edge_label(k, l),
            _ => None,
        };
        total += match image {
            Some(f) => costs.edge_sub(&e.label, f),
            None => costs.edge_del(&e.label),
        };
    }
    for f in h.edges() {
        let preimage = match (pi.source(f.a), pi.source(f.b)) {
            (Some(i), Some(j)) => g.has_edge(i, j),
            _ => false,
        };
        if !preimage {
            total += costs.edge_ins(&f.label);
        }
    }
    total
}

/// Relabels `g` by `permutation` (node `i` becomes node `permutation[i]`)
/// and returns the copy together with the isomorphism as a node map.
pub fn permute_graph(g: &LabeledGraph, permutation: &[usize]) -> Result<(LabeledGraph, NodeMap)> {
    let n = g.order();
    let not_bijective = || GedError::NotBijection(n);
    if permutation.len() != n {
        return Err(not_bijective());
    }
    let mut labels: Vec<Option<String>> = vec![None; n];
    for (i, &p) in permutation.iter().enumerate() {
        match labels.get_mut(p) {
            Some(slot @ None) => *slot = Some(g.label(i).to_string()),
            _ => return Err(not_bijective()),
        }
    }
    let labels = labels.into_iter().map(|l| l.expect("bijection fills every slot")).collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| (permutation[e.a], permutation[e.b], e.label.clone()));
    let copy = LabeledGraph::new(format!("{}~shuffled", g.id()), labels, edges)?;
    let witness = NodeMap::from_forward(permutation.iter().map(|&p| Some(p)).collect(), n)?;
    Ok((copy, witness))
}
