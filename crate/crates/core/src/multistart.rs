//! Parallel multi-start and the RANDPOST warm-start loop.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::beam::{bp_beam, ibp_beam};
use crate::error::{GedError, Result};
use crate::ipfp::{ipfp, IpfpConfig};
use crate::lsape::{lsape_solve, ExtendedCostMatrix};
use crate::model::{edit_path_cost, validate_node_map, EditCostModel, LabeledGraph, NodeMap};
use crate::refine::{k_refine, RefineConfig};
use crate::seeds;

/// Weight cap used when an improved map's cost meets the lower bound.
pub const WEIGHT_CAP: f64 = 1e6;

/// Scores for every assignment: `(n+1) x (m+1)`, last column for deletions,
/// last row for insertions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoresMatrix {
    sources: usize,
    targets: usize,
    entries: Vec<f64>,
}

impl ScoresMatrix {
    pub fn zeros(sources: usize, targets: usize) -> Self {
        ScoresMatrix { sources, targets, entries: vec![0.0; (sources + 1) * (targets + 1)] }
    }

    pub fn source_count(&self) -> usize {
        self.sources
    }

    pub fn target_count(&self) -> usize {
        self.targets
    }

    /// Cell `(i, k)`; `i == n` is the insertion row, `k == m` the deletion column.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.entries[i * (self.targets + 1) + k]
    }

    pub fn set(&mut self, i: usize, k: usize, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(GedError::InvalidParameter(format!("score {value} must be finite and >= 0")));
        }
        let cols = self.targets + 1;
        self.entries[i * cols + k] = value;
        Ok(())
    }

    /// Adds `weight` to every cell of `map`'s assignments.
    pub fn add_map(&mut self, map: &NodeMap, weight: f64) {
        let cols = self.targets + 1;
        for a in map.assignments() {
            let i = a.source.unwrap_or(self.sources);
            let k = a.target.unwrap_or(self.targets);
            if i < self.sources || k < self.targets {
                self.entries[i * cols + k] += weight;
            }
        }
    }
}

/// How initial node maps are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    /// Uniform random maximum-cardinality matching, completed with deletions
    /// and insertions.
    #[default]
    Random,
    /// LSAPE over node edit costs; all but the first solve use shuffled rows
    /// and columns so ties resolve differently.
    NodeCostLsape,
    /// One plain NODE-COST-LSAPE map followed by random maps.
    Mixed,
}

/// Local search run from every initial map.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalSearch {
    Refine(RefineConfig),
    Ipfp(IpfpConfig),
    BpBeam { beam_width: usize },
    IbpBeam { beam_width: usize, num_orderings: usize },
}

impl LocalSearch {
    pub fn name(&self) -> &'static str {
        match self {
            LocalSearch::Refine(c) if c.max_swap_size == 2 && !c.use_dummy_assignment => "refine",
            LocalSearch::Refine(_) => "k-refine",
            LocalSearch::Ipfp(_) => "ipfp",
            LocalSearch::BpBeam { .. } => "bp-beam",
            LocalSearch::IbpBeam { .. } => "ibp-beam",
        }
    }

    /// Improves `init`; `seed` drives any randomness. The result has its
    /// cost cached.
    pub fn run(
        &self,
        g: &LabeledGraph,
        h: &LabeledGraph,
        costs: &EditCostModel,
        init: &NodeMap,
        seed: u64,
    ) -> Result<NodeMap> {
        let mut out = match self {
            LocalSearch::Refine(c) => k_refine(g, h, init.clone(), c, costs)?,
            LocalSearch::Ipfp(c) => ipfp(g, h, init.clone(), c, costs)?,
            LocalSearch::BpBeam { beam_width } => bp_beam(g, h, init, *beam_width, seed, costs)?,
            LocalSearch::IbpBeam { beam_width, num_orderings } => {
                ibp_beam(g, h, init, *beam_width, *num_orderings, seed, costs)?
            }
        };
        if out.cached_cost().is_none() {
            let c = edit_path_cost(g, h, &out, costs)?;
            out.set_cached_cost(c);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultistartConfig {
    pub kappa: usize,
    pub rho: f64,
    pub num_loops: usize,
    pub eta: f64,
    pub lower_bound: f64,
    pub seed: u64,
    pub init: InitStrategy,
    /// Keep the first `⌈ρκ⌉` maps by index instead of the first to finish.
    pub deterministic: bool,
}

impl Default for MultistartConfig {
    fn default() -> Self {
        MultistartConfig {
            kappa: 40,
            rho: 1.0,
            num_loops: 0,
            eta: 1.0,
            lower_bound: 0.0,
            seed: 0,
            init: InitStrategy::Random,
            deterministic: false,
        }
    }
}

impl MultistartConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kappa == 0 {
            return Err(GedError::InvalidParameter("kappa must be at least 1".into()));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(GedError::InvalidParameter(format!("rho {} must lie in (0, 1]", self.rho)));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(GedError::InvalidParameter(format!("eta {} must lie in [0, 1]", self.eta)));
        }
        if !self.lower_bound.is_finite() || self.lower_bound < 0.0 {
            return Err(GedError::InvalidParameter(format!(
                "lower bound {} must be finite and >= 0",
                self.lower_bound
            )));
        }
        Ok(())
    }

    /// Number of local optima kept per round.
    pub fn kept(&self) -> usize {
        kept_count(self.rho, self.kappa)
    }
}

fn kept_count(rho: f64, count: usize) -> usize {
    ((rho * count as f64).ceil() as usize).clamp(1, count.max(1))
}

/// Uniform random maximum-cardinality matching.
pub fn random_node_map(n: usize, m: usize, rng: &mut impl Rng) -> NodeMap {
    let mut sources: Vec<usize> = (0..n).collect();
    let mut targets: Vec<usize> = (0..m).collect();
    sources.shuffle(rng);
    targets.shuffle(rng);
    let mut forward = vec![None; n];
    for (&i, &k) in sources.iter().zip(&targets) {
        forward[i] = Some(k);
    }
    NodeMap::from_forward(forward, m).expect("injective by construction")
}

fn node_cost_matrix(g: &LabeledGraph, h: &LabeledGraph, costs: &EditCostModel) -> ExtendedCostMatrix {
    let (n, m) = (g.order(), h.order());
    ExtendedCostMatrix::from_fn(n, m, |i, k| {
        costs.node_assignment((i < n).then(|| g.label(i)), (k < m).then(|| h.label(k)))
    })
    .expect("edit costs are finite")
}

fn node_cost_lsape(c: &ExtendedCostMatrix, rng: Option<&mut rand_chacha::ChaCha8Rng>) -> NodeMap {
    let (n, m) = (c.rows(), c.cols());
    let Some(rng) = rng else {
        return lsape_solve(c).map;
    };
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let permuted = ExtendedCostMatrix::from_fn(n, m, |i, k| {
        c.get(if i < n { rows[i] } else { n }, if k < m { cols[k] } else { m })
    })
    .expect("entries copied from a valid matrix");
    let solved = lsape_solve(&permuted).map;
    let mut forward = vec![None; n];
    for (pi, target) in solved.forward().iter().enumerate() {
        forward[rows[pi]] = target.map(|pk| cols[pk]);
    }
    NodeMap::from_forward(forward, m).expect("permutation preserves injectivity")
}

/// `count` initial node maps (not necessarily distinct).
pub fn generate_initial_maps(
    g: &LabeledGraph,
    h: &LabeledGraph,
    count: usize,
    strategy: InitStrategy,
    seed: u64,
    costs: &EditCostModel,
) -> Result<Vec<NodeMap>> {
    if count == 0 {
        return Err(GedError::InvalidParameter("count must be at least 1".into()));
    }
    let (n, m) = (g.order(), h.order());
    let mut rng = seeds::rng(seed);
    let maps = match strategy {
        InitStrategy::Random => (0..count).map(|_| random_node_map(n, m, &mut rng)).collect(),
        InitStrategy::NodeCostLsape => {
            let c = node_cost_matrix(g, h, costs);
            (0..count)
                .map(|idx| node_cost_lsape(&c, (idx > 0).then_some(&mut rng)))
                .collect()
        }
        InitStrategy::Mixed => {
            let c = node_cost_matrix(g, h, costs);
            std::iter::once(node_cost_lsape(&c, None))
                .chain((1..count).map(|_| random_node_map(n, m, &mut rng)))
                .collect()
        }
    };
    Ok(maps)
}

/// Runs `algorithm` from the initial maps and keeps `⌈ρ·|initial|⌉` results.
///
/// Deterministic mode keeps the first results by index. Otherwise results
/// are kept in completion order and later ones are ignored; the first
/// `pinned` maps are always kept.
pub struct MultistartRun<'a> {
    pub g: &'a LabeledGraph,
    pub h: &'a LabeledGraph,
    pub costs: &'a EditCostModel,
    pub algorithm: &'a LocalSearch,
    pub rho: f64,
    pub seed: u64,
    pub deterministic: bool,
    pub pinned: usize,
}

impl MultistartRun<'_> {
    pub fn run(&self, initial: &[NodeMap]) -> Result<Vec<NodeMap>> {
        if initial.is_empty() {
            return Err(GedError::InvalidParameter("no initial maps".into()));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(GedError::InvalidParameter(format!("rho {} must lie in (0, 1]", self.rho)));
        }
        for map in initial {
            if !validate_node_map(self.g, self.h, map) {
                return Err(GedError::InvalidNodeMap("initial map does not fit the graph pair".into()));
            }
        }
        let target = kept_count(self.rho, initial.len());
        let search = |idx: usize| {
            self.algorithm
                .run(self.g, self.h, self.costs, &initial[idx], seeds::derive(self.seed, idx as u64))
        };
        if self.deterministic || target == initial.len() {
            return (0..target).into_par_iter().map(search).collect();
        }

        let pinned = self.pinned.min(target);
        let stop = AtomicBool::new(false);
        let done: Mutex<(Vec<Option<NodeMap>>, Vec<NodeMap>, usize)> =
            Mutex::new((vec![None; pinned], Vec::new(), 0));
        let failure: Mutex<Option<GedError>> = Mutex::new(None);
        rayon::scope(|scope| {
            for idx in 0..initial.len() {
                let (stop, done, failure, search) = (&stop, &done, &failure, &search);
                scope.spawn(move |_| {
                    if idx >= pinned && stop.load(Ordering::Acquire) {
                        return;
                    }
                    match search(idx) {
                        Ok(map) => {
                            let mut guard = done.lock().expect("poisoned");
                            let (pins, free, pins_done) = &mut *guard;
                            if idx < pinned {
                                pins[idx] = Some(map);
                                *pins_done += 1;
                            } else if free.len() < target - pinned {
                                free.push(map);
                            }
                            if *pins_done == pinned && free.len() >= target - pinned {
                                stop.store(true, Ordering::Release);
                            }
                        }
                        Err(e) => {
                            failure.lock().expect("poisoned").get_or_insert(e);
                            stop.store(true, Ordering::Release);
                        }
                    }
                });
            }
        });
        if let Some(e) = failure.into_inner().expect("poisoned") {
            return Err(e);
        }
        let (pins, free, _) = done.into_inner().expect("poisoned");
        Ok(pins.into_iter().map(|m| m.expect("pinned maps always run")).chain(free).collect())
    }
}

/// Adds each improved map's weight to its assignment cells.
pub fn update_scores(
    m: &ScoresMatrix,
    improved: &[NodeMap],
    eta: f64,
    lb: f64,
    ub: f64,
) -> Result<ScoresMatrix> {
    if ub < lb {
        return Err(GedError::InvalidParameter(format!("upper bound {ub} is below lower bound {lb}")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(GedError::InvalidParameter(format!("eta {eta} must lie in [0, 1]")));
    }
    let mut out = m.clone();
    for map in improved {
        let cost = map
            .cached_cost()
            .ok_or_else(|| GedError::InvalidParameter("improved map has no cached cost".into()))?;
        let gap = cost - lb;
        let ratio = if gap < 1e-12 { WEIGHT_CAP } else { (ub - lb) / gap };
        out.add_map(map, (1.0 - eta) + eta * ratio);
    }
    Ok(out)
}

fn sample_one(m: &ScoresMatrix, rng: &mut impl Rng) -> NodeMap {
    let (n, cols) = (m.sources, m.targets);
    let mut covered = vec![false; cols];
    let mut forward = vec![None; n];
    let mut candidates = Vec::with_capacity(cols + 1);
    let mut weights = Vec::with_capacity(cols + 1);
    for (i, slot) in forward.iter_mut().enumerate() {
        candidates.clear();
        weights.clear();
        for k in (0..cols).filter(|&k| !covered[k]).chain(std::iter::once(cols)) {
            candidates.push(k);
            weights.push(m.get(i, k));
        }
        let pick = match WeightedIndex::new(&weights) {
            Ok(dist) => candidates[dist.sample(rng)],
            Err(_) => candidates[rng.random_range(0..candidates.len())],
        };
        if pick < cols {
            covered[pick] = true;
            *slot = Some(pick);
        }
    }
    NodeMap::from_forward(forward, cols).expect("columns are covered at most once")
}

/// Samples `count` node maps row by row from the scores. Distinct maps are
/// drawn for up to `100·count` attempts, after which duplicates fill the rest.
pub fn sample_node_maps(m: &ScoresMatrix, count: usize, seed: u64) -> Result<Vec<NodeMap>> {
    if count == 0 {
        return Err(GedError::InvalidParameter("count must be at least 1".into()));
    }
    let mut rng = seeds::rng(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut draws = 0;
    while out.len() < count && draws < 100 * count {
        draws += 1;
        let map = sample_one(m, &mut rng);
        if seen.insert(map.clone()) {
            out.push(map);
        }
    }
    while out.len() < count {
        out.push(sample_one(m, &mut rng));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopRecord {
    pub upper_bound: f64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct RandpostOutcome {
    pub upper_bound: f64,
    pub best: NodeMap,
    /// Entry 0 is the initial multistart, then one entry per loop. Elapsed
    /// times are cumulative.
    pub loops: Vec<LoopRecord>,
}

/// RANDPOST from generated initial maps.
pub fn randpost(
    g: &LabeledGraph,
    h: &LabeledGraph,
    config: &MultistartConfig,
    algorithm: &LocalSearch,
    costs: &EditCostModel,
) -> Result<RandpostOutcome> {
    randpost_seeded(g, h, config, algorithm, costs, &[])
}

/// RANDPOST whose first round starts with `seeded` maps in front of the
/// generated ones (κ maps in total). Seeded maps are always run.
pub fn randpost_seeded(
    g: &LabeledGraph,
    h: &LabeledGraph,
    config: &MultistartConfig,
    algorithm: &LocalSearch,
    costs: &EditCostModel,
    seeded: &[NodeMap],
) -> Result<RandpostOutcome> {
    config.validate()?;
    let start = Instant::now();
    let kept = config.kept();
    if seeded.len() > kept {
        return Err(GedError::InvalidParameter(format!(
            "{} seeded maps exceed the {kept} kept per round",
            seeded.len()
        )));
    }
    let mut initial = seeded.to_vec();
    if initial.len() < config.kappa {
        initial.extend(generate_initial_maps(
            g,
            h,
            config.kappa - initial.len(),
            config.init,
            seeds::derive(config.seed, 0),
            costs,
        )?);
    }
    let run = |round: u64, pinned: usize, maps: &[NodeMap]| {
        MultistartRun {
            g,
            h,
            costs,
            algorithm,
            rho: config.rho,
            seed: seeds::derive(config.seed, 2 * round + 1),
            deterministic: config.deterministic,
            pinned,
        }
        .run(maps)
    };

    let mut improved = run(0, seeded.len(), &initial)?;
    let mut best = pick_best(&improved);
    let mut ub = best.cached_cost().expect("local search caches costs");
    let mut loops = vec![LoopRecord { upper_bound: ub, elapsed: start.elapsed() }];
    let mut scores = ScoresMatrix::zeros(g.order(), h.order());
    for round in 1..=config.num_loops as u64 {
        scores = update_scores(&scores, &improved, config.eta, config.lower_bound, ub)?;
        let sampled = sample_node_maps(&scores, config.kappa, seeds::derive(config.seed, 2 * round))?;
        improved = run(round, 0, &sampled)?;
        let candidate = pick_best(&improved);
        if candidate.cached_cost().expect("cached") < ub {
            ub = candidate.cached_cost().expect("cached");
            best = candidate;
        }
        loops.push(LoopRecord { upper_bound: ub, elapsed: start.elapsed() });
    }
    Ok(RandpostOutcome { upper_bound: ub, best, loops })
}

fn pick_best(maps: &[NodeMap]) -> NodeMap {
    maps.iter()
        .reduce(|a, b| if b.cached_cost() < a.cached_cost() { b } else { a })
        .expect("at least one map is kept")
        .clone()
}
