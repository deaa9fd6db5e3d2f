//! Brute-force exact graph edit distance for small graphs.

use crate::error::{GedError, Result};
use crate::model::{edit_path_cost_unchecked, EditCostModel, LabeledGraph, NodeMap};

/// Largest `|V(g)| + |V(h)|` accepted by the exhaustive routines.
pub const EXACT_SIZE_LIMIT: usize = 12;

fn guard(g: &LabeledGraph, h: &LabeledGraph) -> Result<()> {
    if g.order() + h.order() > EXACT_SIZE_LIMIT {
        return Err(GedError::SizeGuard(format!(
            "exact GED limited to {EXACT_SIZE_LIMIT} nodes in total, got {} + {}",
            g.order(),
            h.order()
        )));
    }
    Ok(())
}

/// Every node map between `n` sources and `m` targets, each once.
///
/// Walks the images of the sources as an odometer over `{v_1..v_m, ε}` and
/// skips non-injective digits.
#[derive(Debug, Clone)]
pub struct NodeMaps {
    targets: usize,
    digits: Vec<usize>,
    done: bool,
}

impl NodeMaps {
    fn new(sources: usize, targets: usize) -> Self {
        // all sources start at ε, which is injective
        NodeMaps { targets, digits: vec![targets; sources], done: false }
    }

    fn injective(&self) -> bool {
        let mut used = vec![false; self.targets];
        for &d in &self.digits {
            if d < self.targets {
                if used[d] {
                    return false;
                }
                used[d] = true;
            }
        }
        true
    }

    fn step(&mut self) {
        if self.targets == 0 {
            self.done = true;
            return;
        }
        for d in self.digits.iter_mut() {
            if *d == self.targets {
                *d = 0;
            } else {
                *d += 1;
                if *d == self.targets {
                    continue;
                }
            }
            return;
        }
        self.done = true;
    }
}

impl Iterator for NodeMaps {
    type Item = NodeMap;

    fn next(&mut self) -> Option<NodeMap> {
        while !self.done {
            let current = self.injective().then(|| {
                let forward = self.digits.iter().map(|&d| (d < self.targets).then_some(d)).collect();
                NodeMap::from_forward(forward, self.targets).expect("injective digits")
            });
            self.step();
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

/// All node maps between `g` and `h`.
pub fn enumerate_node_maps(g: &LabeledGraph, h: &LabeledGraph) -> Result<NodeMaps> {
    guard(g, h)?;
    Ok(NodeMaps::new(g.order(), h.order()))
}

/// Exact GED with a witness map (first minimum in enumeration order).
pub fn exact_ged(g: &LabeledGraph, h: &LabeledGraph, costs: &EditCostModel) -> Result<(f64, NodeMap)> {
    let mut best: Option<(f64, NodeMap)> = None;
    for map in enumerate_node_maps(g, h)? {
        let cost = edit_path_cost_unchecked(g, h, &map, costs);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, map));
        }
    }
    let (cost, mut map) = best.expect("at least one node map exists");
    map.set_cached_cost(cost);
    Ok((cost, map))
}
