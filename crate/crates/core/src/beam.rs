//! BP-BEAM and IBP-BEAM: beam search over positional target exchanges of a
//! randomly ordered node map.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{GedError, Result};
use crate::model::{edit_path_cost, validate_node_map, Assignment, EditCostModel, LabeledGraph, NodeMap};
use crate::seeds;
use crate::swap::rotation_delta;

/// A node map with an explicit order on its assignments. Exchanging targets
/// may produce `(ε, ε)` entries; they stay in place so the length is fixed.
#[derive(Debug, Clone)]
pub struct OrderedNodeMap {
    order: Vec<Assignment>,
    map: NodeMap,
    cost: f64,
}

impl OrderedNodeMap {
    /// Canonical order of `map`'s assignments.
    pub fn new(
        g: &LabeledGraph,
        h: &LabeledGraph,
        map: &NodeMap,
        costs: &EditCostModel,
    ) -> Result<Self> {
        let cost = match map.cached_cost() {
            Some(c) => c,
            None => edit_path_cost(g, h, map, costs)?,
        };
        let mut map = map.clone();
        map.set_cached_cost(cost);
        Ok(OrderedNodeMap { order: map.assignments(), map, cost })
    }

    /// Orders the assignments by a seeded shuffle.
    pub fn shuffled(
        g: &LabeledGraph,
        h: &LabeledGraph,
        map: &NodeMap,
        costs: &EditCostModel,
        seed: u64,
    ) -> Result<Self> {
        let mut ordered = Self::new(g, h, map, costs)?;
        ordered.order.shuffle(&mut seeds::rng(seed));
        Ok(ordered)
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// The underlying node map, with its cost cached.
    pub fn node_map(&self) -> &NodeMap {
        &self.map
    }

    fn exchange_delta(&self, g: &LabeledGraph, h: &LabeledGraph, s: usize, t: usize, costs: &EditCostModel) -> f64 {
        if s == t {
            return 0.0;
        }
        rotation_delta(g, h, &self.map, &[self.order[s], self.order[t]], costs)
    }

    fn exchanged(&self, s: usize, t: usize, delta: f64) -> OrderedNodeMap {
        let mut next = self.clone();
        if s != t {
            let (a, b) = (self.order[s], self.order[t]);
            let (na, nb) = (Assignment::new(a.source, b.target), Assignment::new(b.source, a.target));
            next.order[s] = na;
            next.order[t] = nb;
            next.map.replace(&[a, b], &[na, nb]);
            next.cost = self.cost + delta;
            next.map.set_cached_cost(next.cost);
        }
        next
    }

    /// Exchanges the targets at positions `s <= t` (0-based); sources stay.
    pub fn ordered_swap(
        &self,
        g: &LabeledGraph,
        h: &LabeledGraph,
        s: usize,
        t: usize,
        costs: &EditCostModel,
    ) -> Result<OrderedNodeMap> {
        if s > t || t >= self.len() {
            return Err(GedError::InvalidParameter(format!(
                "swap positions ({s}, {t}) invalid for {} assignments",
                self.len()
            )));
        }
        Ok(self.exchanged(s, t, self.exchange_delta(g, h, s, t, costs)))
    }
}

struct TreeNode {
    cost: f64,
    seq: u64,
    depth: usize,
    content: Content,
}

enum Content {
    Ready(OrderedNodeMap),
    // child of the node being expanded, not yet materialized
    Pending(usize),
}

fn by_priority(a: &TreeNode, b: &TreeNode) -> Ordering {
    a.cost.total_cmp(&b.cost).then(a.seq.cmp(&b.seq))
}

/// Beam search from `pi` under the ordering drawn from `ordering_seed`.
pub fn bp_beam(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    beam_width: usize,
    ordering_seed: u64,
    costs: &EditCostModel,
) -> Result<NodeMap> {
    if beam_width == 0 {
        return Err(GedError::InvalidParameter("beam width must be at least 1".into()));
    }
    if !validate_node_map(g, h, pi) {
        return Err(GedError::InvalidNodeMap("initial map does not fit the graph pair".into()));
    }
    let root = OrderedNodeMap::shuffled(g, h, pi, costs, ordering_seed)?;
    let len = root.len();
    let mut best = root.clone();
    let mut seq = 0u64;
    let mut queue = vec![TreeNode { cost: root.cost, seq, depth: 0, content: Content::Ready(root) }];

    while !queue.is_empty() {
        let top = queue.remove(0);
        let Content::Ready(node) = top.content else {
            unreachable!("queue entries are materialized before extraction")
        };
        if node.cost < best.cost {
            best = node.clone();
        }
        if len == 0 || top.depth + 1 >= len {
            continue;
        }
        let s = top.depth;
        for t in s..len {
            seq += 1;
            queue.push(TreeNode {
                cost: node.cost + node.exchange_delta(g, h, s, t, costs),
                seq,
                depth: s + 1,
                content: Content::Pending(t),
            });
        }
        queue.sort_by(by_priority);
        queue.truncate(beam_width);
        for entry in queue.iter_mut() {
            if let Content::Pending(t) = entry.content {
                entry.content = Content::Ready(node.exchanged(s, t, entry.cost - node.cost));
            }
        }
    }
    let mut out = best.map;
    out.set_dummy_pair(false);
    out.set_cached_cost(best.cost);
    Ok(out)
}

/// Best result of `num_orderings` BP-BEAM runs with orderings seeded from
/// `seed`. Runs execute in parallel; ties go to the lowest ordering index.
pub fn ibp_beam(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    beam_width: usize,
    num_orderings: usize,
    seed: u64,
    costs: &EditCostModel,
) -> Result<NodeMap> {
    if num_orderings == 0 {
        return Err(GedError::InvalidParameter("at least one ordering is required".into()));
    }
    let runs: Vec<NodeMap> = (0..num_orderings as u64)
        .into_par_iter()
        .map(|i| bp_beam(g, h, pi, beam_width, ordering_seed(seed, i), costs))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.cached_cost() < a.cached_cost() { b } else { a })
        .expect("num_orderings >= 1");
    Ok(best)
}

/// Ordering seed used by [`ibp_beam`] for its `index`-th run.
pub fn ordering_seed(seed: u64, index: u64) -> u64 {
    seeds::derive(seed, index)
}
