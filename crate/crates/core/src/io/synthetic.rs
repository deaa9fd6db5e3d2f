//! Seeded random labeled graphs.

use rand::Rng;

use crate::error::{GedError, Result};
use crate::model::LabeledGraph;
use crate::seeds;

/// Erdős–Rényi style graph: every pair is an edge with probability
/// `edge_density`. Node labels are drawn from `a0..`, edge labels from `b0..`.
pub fn generate_synthetic(
    id: impl Into<String>,
    num_nodes: usize,
    edge_density: f64,
    label_alphabet_size: usize,
    seed: u64,
) -> Result<LabeledGraph> {
    if !(0.0..=1.0).contains(&edge_density) {
        return Err(GedError::InvalidParameter(format!("density {edge_density} must lie in [0, 1]")));
    }
    if label_alphabet_size == 0 {
        return Err(GedError::InvalidParameter("label alphabet must be non-empty".into()));
    }
    let mut rng = seeds::rng(seed);
    let labels = (0..num_nodes)
        .map(|_| format!("a{}", rng.random_range(0..label_alphabet_size)))
        .collect();
    let mut edges = Vec::new();
    for a in 0..num_nodes {
        for b in a + 1..num_nodes {
            if rng.random_bool(edge_density) {
                edges.push((a, b, format!("b{}", rng.random_range(0..label_alphabet_size))));
            }
        }
    }
    LabeledGraph::new(id, labels, edges)
}

/// `count` graphs with ids `<prefix>0..`, each on its own seed stream.
pub fn generate_dataset(
    prefix: &str,
    count: usize,
    num_nodes: usize,
    edge_density: f64,
    label_alphabet_size: usize,
    seed: u64,
) -> Result<Vec<LabeledGraph>> {
    (0..count)
        .map(|i| {
            generate_synthetic(
                format!("{prefix}{i}"),
                num_nodes,
                edge_density,
                label_alphabet_size,
                seeds::derive(seed, i as u64),
            )
        })
        .collect()
}
