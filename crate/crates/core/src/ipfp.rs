//! IPFP: Frank-Wolfe descent on the quadratic formulation of GED with
//! LSAPE linearizations and a final projection onto node maps.
//!
//! Node maps are `(n+1) x (m+1)` matrices (last row insertions, last column
//! deletions). The quadratic form `c(X) = vec(X)ᵀ D vec(X)` uses node edit
//! costs on the diagonal of `D` and half the edge edit cost induced by a
//! pair of assignments off the diagonal, so that each edge is paid once on
//! binary maps. `D` is never stored; products are computed from adjacency.

use crate::error::{GedError, Result};
use crate::lsape::{lsape_solve, ExtendedCostMatrix};
use crate::model::{edit_path_cost, validate_node_map, EditCostModel, LabeledGraph, NodeMap};

/// Below this, `c(X_k)` counts as zero in the stopping ratio.
const ZERO_COST: f64 = 1e-12;

/// Implicit quadratic cost matrix for a graph pair.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticModel<'a> {
    g: &'a LabeledGraph,
    h: &'a LabeledGraph,
    costs: &'a EditCostModel,
}

impl<'a> QuadraticModel<'a> {
    pub fn new(g: &'a LabeledGraph, h: &'a LabeledGraph, costs: &'a EditCostModel) -> Self {
        QuadraticModel { g, h, costs }
    }

    pub fn rows(&self) -> usize {
        self.g.order()
    }

    pub fn cols(&self) -> usize {
        self.h.order()
    }

    fn real_row(&self, i: usize) -> Option<usize> {
        (i < self.g.order()).then_some(i)
    }

    fn real_col(&self, k: usize) -> Option<usize> {
        (k < self.h.order()).then_some(k)
    }

    /// Node edit cost of assignment `(i, k)`; index `n` / `m` is ε.
    pub fn node_cost(&self, i: usize, k: usize) -> f64 {
        self.costs.node_assignment(
            self.real_row(i).map(|i| self.g.label(i)),
            self.real_col(k).map(|k| self.h.label(k)),
        )
    }

    /// Edge edit cost induced by assignments `(i, k)` and `(j, l)` together.
    /// Pairs that cannot coexist in a node map cost 0.
    pub fn pair_cost(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        let (ri, rj) = (self.real_row(i), self.real_row(j));
        let (ck, cl) = (self.real_col(k), self.real_col(l));
        if (ri.is_some() && ri == rj) || (ck.is_some() && ck == cl) {
            return 0.0;
        }
        let e = match (ri, rj) {
            (Some(i), Some(j)) => self.g.edge_label(i, j),
            _ => None,
        };
        let f = match (ck, cl) {
            (Some(k), Some(l)) => self.h.edge_label(k, l),
            _ => None,
        };
        self.costs.edge_pair(e, f)
    }

    /// Entry of `D` between assignments `a = (i, k)` and `b = (j, l)`.
    pub fn entry(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        if a == b {
            self.node_cost(a.0, a.1)
        } else {
            0.5 * self.pair_cost(a.0, a.1, b.0, b.1)
        }
    }

    /// `D y` for an arbitrary `(n+1) x (m+1)` matrix `y`.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let (n, m) = (self.rows(), self.cols());
        let width = m + 1;
        debug_assert_eq!(y.len(), (n + 1) * width);
        let mut out = vec![0.0; y.len()];
        for i in 0..=n {
            for k in 0..=m {
                let mut acc = self.node_cost(i, k) * y[i * width + k];
                let mut pairs = 0.0;
                // partners (j, l) with an edge (i, j) in g
                if i < n {
                    for &(j, _) in self.g.neighbors(i) {
                        for l in 0..=m {
                            let yl = y[j * width + l];
                            if yl != 0.0 {
                                pairs += self.pair_cost(i, k, j, l) * yl;
                            }
                        }
                    }
                }
                // remaining partners with an edge (k, l) in h
                if k < m {
                    for &(l, _) in self.h.neighbors(k) {
                        for j in 0..=n {
                            if i < n && j < n && self.g.has_edge(i, j) {
                                continue;
                            }
                            let yj = y[j * width + l];
                            if yj != 0.0 {
                                pairs += self.pair_cost(i, k, j, l) * yj;
                            }
                        }
                    }
                }
                acc += 0.5 * pairs;
                out[i * width + k] = acc;
            }
        }
        out
    }

    /// `vec(y)ᵀ D vec(y)`.
    pub fn form(&self, y: &[f64]) -> f64 {
        self.apply(y).iter().zip(y).map(|(a, b)| a * b).sum()
    }
}

/// Row sums over the first `n` rows and column sums over the first `m`
/// columns tolerate this much slack.
const FEASIBILITY_TOLERANCE: f64 = 1e-9;

/// A point of the relaxed node-map polytope, `(n+1) x (m+1)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalMap {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl FractionalMap {
    pub fn from_node_map(map: &NodeMap) -> Self {
        FractionalMap { rows: map.source_count(), cols: map.target_count(), entries: map.to_matrix() }
    }

    /// Wraps entries after checking bounds and the row/column sums.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        let x = FractionalMap { rows, cols, entries };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<()> {
        let width = self.cols + 1;
        if self.entries.len() != (self.rows + 1) * width {
            return Err(GedError::InvalidParameter("fractional map has the wrong shape".into()));
        }
        let tol = FEASIBILITY_TOLERANCE;
        if self.entries.iter().any(|v| !(-tol..=1.0 + tol).contains(v)) {
            return Err(GedError::InvalidParameter("fractional map entry outside [0, 1]".into()));
        }
        for i in 0..self.rows {
            let sum: f64 = self.entries[i * width..(i + 1) * width].iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(GedError::InvalidParameter(format!("row {} sums to {sum}", i + 1)));
            }
        }
        for k in 0..self.cols {
            let sum: f64 = (0..=self.rows).map(|i| self.entries[i * width + k]).sum();
            if (sum - 1.0).abs() > tol {
                return Err(GedError::InvalidParameter(format!("column {} sums to {sum}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.entries[i * (self.cols + 1) + k]
    }

    /// `self + alpha (other - self)`.
    pub fn toward(&self, other: &FractionalMap, alpha: f64) -> FractionalMap {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, b)| x + alpha * (b - x))
            .collect();
        FractionalMap { rows: self.rows, cols: self.cols, entries }
    }
}

/// `c(x)`; equals the induced edit cost when `x` is binary.
pub fn quadratic_cost(model: &QuadraticModel<'_>, x: &FractionalMap) -> f64 {
    model.form(&x.entries)
}

/// The LSAPE instance `D vec(x)`, half the gradient of [`quadratic_cost`].
pub fn linearize(model: &QuadraticModel<'_>, x: &FractionalMap) -> ExtendedCostMatrix {
    ExtendedCostMatrix::from_entries(x.rows, x.cols, model.apply(&x.entries))
        .expect("shape and finiteness preserved")
}

/// Minimizer over `[0, 1]` of `a α² + b α`.
pub fn minimize_on_unit_interval(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        (-b / (2.0 * a)).clamp(0.0, 1.0)
    } else if a + b < 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Exact step size minimizing `c(x + α (b - x))` over `α ∈ [0, 1]`.
pub fn line_search_alpha(model: &QuadraticModel<'_>, x: &FractionalMap, b: &FractionalMap) -> f64 {
    let dx = model.apply(&x.entries);
    let direction: Vec<f64> = b.entries.iter().zip(&x.entries).map(|(b, x)| b - x).collect();
    let quadratic = model.form(&direction);
    let linear = 2.0 * dx.iter().zip(&direction).map(|(g, d)| g * d).sum::<f64>();
    minimize_on_unit_interval(quadratic, linear)
}

/// Node map with maximal overlap with `x`.
pub fn project_to_integral(x: &FractionalMap) -> NodeMap {
    let neg = ExtendedCostMatrix::from_entries(x.rows, x.cols, x.entries.iter().map(|v| -v).collect())
        .expect("shape preserved");
    lsape_solve(&neg).map
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpfpConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for IpfpConfig {
    fn default() -> Self {
        IpfpConfig { epsilon: 1e-3, max_iterations: 100 }
    }
}

/// Result of an IPFP run with the best binary cost after every iteration.
#[derive(Debug, Clone)]
pub struct IpfpOutcome {
    pub map: NodeMap,
    pub incumbent_costs: Vec<f64>,
    pub iterations: usize,
}

pub fn ipfp(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi_init: NodeMap,
    config: &IpfpConfig,
    costs: &EditCostModel,
) -> Result<NodeMap> {
    ipfp_traced(g, h, pi_init, config, costs).map(|o| o.map)
}

pub fn ipfp_traced(
    g: &LabeledGraph,
    h: &LabeledGraph,
    pi_init: NodeMap,
    config: &IpfpConfig,
    costs: &EditCostModel,
) -> Result<IpfpOutcome> {
    if !validate_node_map(g, h, &pi_init) {
        return Err(GedError::InvalidNodeMap("initial map does not fit the graph pair".into()));
    }
    if config.epsilon.is_nan() || config.epsilon < 0.0 {
        return Err(GedError::InvalidParameter(format!("epsilon {} must be >= 0", config.epsilon)));
    }
    let model = QuadraticModel::new(g, h, costs);
    let mut best = pi_init;
    let mut best_cost = match best.cached_cost() {
        Some(c) => c,
        None => edit_path_cost(g, h, &best, costs)?,
    };
    best.set_cached_cost(best_cost);

    let mut x = FractionalMap::from_node_map(&best);
    let mut incumbent_costs = Vec::new();
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let linear = linearize(&model, &x);
        let step = lsape_solve(&linear);
        let step_cost = edit_path_cost(g, h, &step.map, costs)?;
        if step_cost < best_cost {
            best_cost = step_cost;
            best = step.map.clone();
            best.set_cached_cost(best_cost);
        }
        incumbent_costs.push(best_cost);

        let current: f64 = linear.entries().iter().zip(&x.entries).map(|(c, x)| c * x).sum();
        if current < ZERO_COST || (current - step.objective).abs() / current < config.epsilon {
            break;
        }
        let target = FractionalMap::from_node_map(&step.map);
        let alpha = line_search_alpha(&model, &x, &target);
        if alpha <= 0.0 {
            break;
        }
        x = x.toward(&target, alpha);
    }

    let projected = project_to_integral(&x);
    let projected_cost = edit_path_cost(g, h, &projected, costs)?;
    if projected_cost < best_cost {
        best = projected;
        best.set_cached_cost(projected_cost);
    }
    Ok(IpfpOutcome { map: best, incumbent_costs, iterations })
}
