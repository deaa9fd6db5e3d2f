//! Swap cycles over the assignments of a node map.
//!
//! A K'-swap picks K' assignments `a_1 .. a_K'` of a node map and rotates
//! their targets: the source of `a_{i+1}` receives the target of `a_i`.
//! Cycles are enumerated directly as (subset of assignments) x (cyclic
//! order), so the auxiliary bipartite graph is never built.

use std::fmt;

use crate::error::{GedError, Result};
use crate::model::{edit_path_cost_unchecked, Assignment, EditCostModel, LabeledGraph, NodeMap};

/// A directed cycle over distinct assignments of a node map, stored in
/// canonical rotation (smallest assignment first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwapCycle {
    assignments: Vec<Assignment>,
}

impl SwapCycle {
    /// Builds a cycle from assignments in cycle order and rotates it into
    /// canonical form.
    pub fn new(mut assignments: Vec<Assignment>) -> Result<Self> {
        if assignments.len() < 2 {
            return Err(GedError::InvalidParameter(format!(
                "a swap needs at least 2 assignments, got {}",
                assignments.len()
            )));
        }
        for (idx, a) in assignments.iter().enumerate() {
            if assignments[..idx].contains(a) {
                return Err(GedError::InvalidParameter(format!("assignment {a} repeated in swap")));
            }
        }
        let first = (0..assignments.len())
            .min_by_key(|&i| assignments[i])
            .expect("non-empty");
        assignments.rotate_left(first);
        Ok(SwapCycle { assignments })
    }

    /// The forward set F(C) in cycle order.
    pub fn forward(&self) -> &[Assignment] {
        &self.assignments
    }

    /// The backward set B(C): `(source(a_{i+1}), target(a_i))` for each `i`.
    pub fn backward(&self) -> Vec<Assignment> {
        backward_of(&self.assignments).collect()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

impl fmt::Display for SwapCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, a) in self.assignments.iter().enumerate() {
            if idx > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

pub(crate) fn backward_of(cycle: &[Assignment]) -> impl Iterator<Item = Assignment> + '_ {
    let len = cycle.len();
    (0..len).map(move |i| Assignment::new(cycle[(i + 1) % len].source, cycle[i].target))
}

/// Walks all cycles of length `k` over `n` items as index tuples: subsets in
/// lexicographic order, each followed by the `(k-1)!` orders of its tail.
/// The first index of every tuple is the smallest of its subset.
#[derive(Debug, Clone)]
pub(crate) struct CycleIndices {
    n: usize,
    subset: Vec<usize>,
    order: Vec<usize>,
    done: bool,
}

impl CycleIndices {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        CycleIndices {
            n,
            subset: (0..k).collect(),
            order: (1..k).collect(),
            done: k < 2 || k > n,
        }
    }

    /// Writes the current cycle into `out` and advances; false when exhausted.
    pub(crate) fn next_into(&mut self, out: &mut Vec<usize>) -> bool {
        if self.done {
            return false;
        }
        out.clear();
        out.push(self.subset[0]);
        out.extend(self.order.iter().map(|&p| self.subset[p]));
        if !next_permutation(&mut self.order) {
            self.order.sort_unstable();
            self.done = !next_combination(&mut self.subset, self.n);
        }
        true
    }
}

fn next_permutation(items: &mut [usize]) -> bool {
    let len = items.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = len - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Iterator over every K'-swap of a node map, each exactly once in
/// canonical form.
#[derive(Debug, Clone)]
pub struct SwapEnumerator {
    assignments: Vec<Assignment>,
    cursor: CycleIndices,
    buffer: Vec<usize>,
}

impl Iterator for SwapEnumerator {
    type Item = SwapCycle;

    fn next(&mut self) -> Option<SwapCycle> {
        if !self.cursor.next_into(&mut self.buffer) {
            return None;
        }
        let assignments = self.buffer.iter().map(|&i| self.assignments[i]).collect();
        Some(SwapCycle { assignments })
    }
}

/// Enumerates all swaps of size `k_prime` over the assignments of `pi`
/// (including `(ε, ε)` when its flag is set). Empty when `k_prime` exceeds
/// the number of assignments.
pub fn enumerate_swaps(pi: &NodeMap, k_prime: usize) -> SwapEnumerator {
    let assignments = pi.assignments();
    let cursor = CycleIndices::new(assignments.len(), k_prime);
    SwapEnumerator { assignments, cursor, buffer: Vec::with_capacity(k_prime) }
}

fn check_membership(pi: &NodeMap, cycle: &[Assignment]) -> Result<()> {
    match cycle.iter().find(|a| !pi.contains(a)) {
        Some(a) => Err(GedError::ForeignAssignment(a.to_string())),
        None => Ok(()),
    }
}

/// Carries out the swap: removes F(C) and adds B(C) minus `(ε, ε)`. The
/// result has no dummy pair and no cached cost.
pub fn swap_apply(pi: &NodeMap, c: &SwapCycle) -> Result<NodeMap> {
    check_membership(pi, c.forward())?;
    let mut out = pi.clone();
    let added = c.backward();
    out.replace(c.forward(), &added);
    Ok(out)
}

fn require_cost(pi: &NodeMap) -> Result<f64> {
    pi.cached_cost()
        .ok_or_else(|| GedError::InvalidParameter("node map has no cached cost".into()))
}

/// Cost change `c(SWAP(pi, C)) - c(pi)` from the nodes touched by the cycle
/// and their incident edges only.
pub fn swap_cost_localized(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    c: &SwapCycle,
    costs: &EditCostModel,
) -> Result<f64> {
    require_cost(pi)?;
    check_membership(pi, c.forward())?;
    Ok(rotation_delta(g, h, pi, c.forward(), costs))
}

/// Same contract as [`swap_cost_localized`], by full recomputation.
pub fn swap_cost_naive(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    c: &SwapCycle,
    costs: &EditCostModel,
) -> Result<f64> {
    let before = require_cost(pi)?;
    let swapped = swap_apply(pi, c)?;
    Ok(edit_path_cost_unchecked(g, h, &swapped, costs) - before)
}

pub(crate) fn naive_delta(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    cycle: &[Assignment],
    before: f64,
    costs: &EditCostModel,
) -> f64 {
    let mut swapped = pi.clone();
    let added: Vec<Assignment> = backward_of(cycle).collect();
    swapped.replace(cycle, &added);
    edit_path_cost_unchecked(g, h, &swapped, costs) - before
}

// Small linear-scan overlays; cycles are short.
/// Old and new partners of the nodes touched by a cycle. Reusable across
/// evaluations to avoid allocation.
#[derive(Debug, Default)]
pub(crate) struct Overlay {
    sources: Vec<(usize, Option<usize>, Option<usize>)>,
    targets: Vec<(usize, Option<usize>, Option<usize>)>,
}

impl Overlay {
    fn fill(&mut self, cycle: &[Assignment]) {
        let len = cycle.len();
        self.sources.clear();
        self.targets.clear();
        for (i, a) in cycle.iter().enumerate() {
            if let Some(u) = a.source {
                self.sources.push((u, a.target, cycle[(i + len - 1) % len].target));
            }
            if let Some(v) = a.target {
                self.targets.push((v, a.source, cycle[(i + 1) % len].source));
            }
        }
    }

    #[inline]
    fn new_target(&self, pi: &NodeMap, u: usize) -> Option<usize> {
        match self.sources.iter().find(|s| s.0 == u) {
            Some(s) => s.2,
            None => pi.target(u),
        }
    }

    #[inline]
    fn new_source(&self, pi: &NodeMap, v: usize) -> Option<usize> {
        match self.targets.iter().find(|t| t.0 == v) {
            Some(t) => t.2,
            None => pi.source(v),
        }
    }

    fn touches_source(&self, u: usize) -> bool {
        self.sources.iter().any(|s| s.0 == u)
    }

    fn touches_target(&self, v: usize) -> bool {
        self.targets.iter().any(|t| t.0 == v)
    }
}

#[inline]
fn source_edge_cost(
    h: &LabeledGraph,
    label: &str,
    image: (Option<usize>, Option<usize>),
    costs: &EditCostModel,
) -> f64 {
    let f = match image {
        (Some(k), Some(l)) => h.edge_label(k, l),
        _ => None,
    };
    match f {
        Some(f) => costs.edge_sub(label, f),
        None => costs.edge_del(label),
    }
}

#[inline]
fn target_edge_cost(
    g: &LabeledGraph,
    label: &str,
    preimage: (Option<usize>, Option<usize>),
    costs: &EditCostModel,
) -> f64 {
    match preimage {
        (Some(i), Some(j)) if g.has_edge(i, j) => 0.0,
        _ => costs.edge_ins(label),
    }
}

/// Localized cost change of rotating `cycle` (assignments of `pi`, in cycle
/// order). Only nodes in the cycle and edges incident to them are visited.
pub(crate) fn rotation_delta(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    cycle: &[Assignment],
    costs: &EditCostModel,
) -> f64 {
    rotation_delta_with(&mut Overlay::default(), g, h, pi, cycle, costs)
}

pub(crate) fn rotation_delta_with(
    overlay: &mut Overlay,
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: &NodeMap,
    cycle: &[Assignment],
    costs: &EditCostModel,
) -> f64 {
    let mut delta = 0.0;
    for (old, new) in cycle.iter().zip(backward_of(cycle)) {
        delta += costs.node_assignment(
            new.source.map(|i| g.label(i)),
            new.target.map(|k| h.label(k)),
        );
        delta -= costs.node_assignment(
            old.source.map(|i| g.label(i)),
            old.target.map(|k| h.label(k)),
        );
    }

    overlay.fill(cycle);
    for &(u, old_u, new_u) in &overlay.sources {
        for &(w, edge) in g.neighbors(u) {
            if w < u && overlay.touches_source(w) {
                continue;
            }
            let label = g.edges()[edge].label.as_str();
            let old_w = pi.target(w);
            let new_w = overlay.new_target(pi, w);
            delta += source_edge_cost(h, label, (new_u, new_w), costs);
            delta -= source_edge_cost(h, label, (old_u, old_w), costs);
        }
    }
    for &(v, old_v, new_v) in &overlay.targets {
        for &(l, edge) in h.neighbors(v) {
            if l < v && overlay.touches_target(l) {
                continue;
            }
            let label = h.edges()[edge].label.as_str();
            let old_l = pi.source(l);
            let new_l = overlay.new_source(pi, l);
            delta += target_edge_cost(g, label, (new_v, new_l), costs);
            delta -= target_edge_cost(g, label, (old_v, old_l), costs);
        }
    }
    delta
}
