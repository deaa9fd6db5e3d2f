//! K-REFINE local search, with REFINE as its binary-swap, no-dummy,
//! naive-cost configuration.

use crate::error::{GedError, Result};
use crate::model::{induced_cost, validate_node_map, Assignment, EditCostModel, LabeledGraph, NodeMap};
use crate::swap::{backward_of, naive_delta, rotation_delta_with, CycleIndices, Overlay, SwapCycle};

/// Swaps must improve the cost by more than this to be accepted.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    /// Only the nodes and edges touched by a swap are re-evaluated.
    Localized,
    /// Every candidate map is evaluated from scratch.
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    pub max_swap_size: usize,
    pub use_dummy_assignment: bool,
    pub cost_mode: CostMode,
}

impl RefineConfig {
    /// The classic REFINE: binary swaps, no dummy assignment, full
    /// recomputation of every candidate.
    pub fn refine() -> Self {
        RefineConfig { max_swap_size: 2, use_dummy_assignment: false, cost_mode: CostMode::Naive }
    }

    pub fn k_refine(max_swap_size: usize) -> Self {
        RefineConfig { max_swap_size, use_dummy_assignment: true, cost_mode: CostMode::Localized }
    }

    pub fn with_dummy(mut self, on: bool) -> Self {
        self.use_dummy_assignment = on;
        self
    }

    pub fn with_cost_mode(mut self, mode: CostMode) -> Self {
        self.cost_mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_swap_size < 2 {
            return Err(GedError::InvalidParameter(format!(
                "max swap size must be at least 2, got {}",
                self.max_swap_size
            )));
        }
        Ok(())
    }
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig::k_refine(2)
    }
}

/// One improving swap carried out by [`k_refine_observed`].
#[derive(Debug, Clone)]
pub struct AcceptedSwap {
    pub cycle: SwapCycle,
    pub delta: f64,
    pub cost_after: f64,
    pub substitutions_before: usize,
    pub substitutions_after: usize,
}

/// Runs K-REFINE from `pi` and returns a map that is no costlier.
pub fn k_refine(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi: NodeMap,
    config: &RefineConfig,
    costs: &EditCostModel,
) -> Result<NodeMap> {
    k_refine_observed(g, h, pi, config, costs, &mut |_| {})
}

/// [`k_refine`] reporting every accepted swap to `observer`.
pub fn k_refine_observed(
    g: &LabeledGraph,
    h: &LabeledGraph,
    mut pi: NodeMap,
    config: &RefineConfig,
    costs: &EditCostModel,
    observer: &mut dyn FnMut(&AcceptedSwap),
) -> Result<NodeMap> {
    config.validate()?;
    if !validate_node_map(g, h, &pi) {
        return Err(GedError::InvalidNodeMap("initial map does not fit the graph pair".into()));
    }
    let mut cost = match pi.cached_cost() {
        Some(c) => c,
        None => induced_cost(g, h, &mut pi, costs)?,
    };

    let mut size = 2;
    let mut indices = Vec::with_capacity(config.max_swap_size);
    let mut cycle: Vec<Assignment> = Vec::with_capacity(config.max_swap_size);
    let mut best: Vec<Assignment> = Vec::with_capacity(config.max_swap_size);
    let mut overlay = Overlay::default();
    loop {
        if config.use_dummy_assignment {
            pi.set_dummy_pair(true);
        }
        let assignments = pi.assignments();
        let mut best_delta = 0.0;
        best.clear();
        let mut cursor = CycleIndices::new(assignments.len(), size);
        while cursor.next_into(&mut indices) {
            cycle.clear();
            cycle.extend(indices.iter().map(|&i| assignments[i]));
            let delta = match config.cost_mode {
                CostMode::Localized => rotation_delta_with(&mut overlay, g, h, &pi, &cycle, costs),
                CostMode::Naive => naive_delta(g, h, &pi, &cycle, cost, costs),
            };
            if delta < best_delta {
                best_delta = delta;
                best.clone_from(&cycle);
            }
        }

        if best_delta < -IMPROVEMENT_TOLERANCE {
            let before = pi.substitution_count();
            let added: Vec<Assignment> = backward_of(&best).collect();
            pi.replace(&best, &added);
            cost += best_delta;
            pi.set_cached_cost(cost);
            observer(&AcceptedSwap {
                cycle: SwapCycle::new(best.clone()).expect("enumerated cycles are valid"),
                delta: best_delta,
                cost_after: cost,
                substitutions_before: before,
                substitutions_after: pi.substitution_count(),
            });
            size = 2;
        } else {
            size += 1;
            if size > config.max_swap_size {
                break;
            }
        }
    }
    pi.set_dummy_pair(false);
    pi.set_cached_cost(cost);
    Ok(pi)
}
