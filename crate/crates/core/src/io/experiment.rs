//! All-pairs experiments with CSV reporting.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{GedError, Result};
use crate::model::{permute_graph, EditCostModel, LabeledGraph, NodeMap};
use crate::multistart::{randpost_seeded, LocalSearch, MultistartConfig};
use crate::seeds;

pub const CSV_HEADER: [&str; 13] =
    ["g_id", "h_id", "algorithm", "K", "kappa", "rho", "L", "eta", "beam", "iters", "seed", "ub", "seconds"];

const SUMMARY_HEADER: [&str; 13] =
    ["algorithm", "K", "kappa", "rho", "L", "eta", "beam", "iters", "pairs", "shuffled", "d", "d_hat", "t"];

/// One algorithm configuration of the grid. The multistart seed is replaced
/// by a per-pair seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub search: LocalSearch,
    pub multistart: MultistartConfig,
}

impl RunSpec {
    fn columns(&self) -> [String; 8] {
        let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
        let (k, beam, iters) = match &self.search {
            LocalSearch::Refine(c) => (Some(c.max_swap_size), None, None),
            LocalSearch::Ipfp(c) => (None, None, Some(c.max_iterations)),
            LocalSearch::BpBeam { beam_width } | LocalSearch::IbpBeam { beam_width, .. } => {
                (None, Some(*beam_width), None)
            }
        };
        let ms = &self.multistart;
        [
            self.search.name().to_string(),
            opt(k),
            ms.kappa.to_string(),
            ms.rho.to_string(),
            ms.num_loops.to_string(),
            ms.eta.to_string(),
            opt(beam),
            opt(iters),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub runs: Vec<RunSpec>,
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    pub workers: usize,
    /// Keep results by index and write zero timings so reports are
    /// byte-reproducible.
    pub deterministic: bool,
    /// Include graph-vs-shuffled-copy pairs.
    pub shuffled: bool,
    /// Start shuffled-copy runs from the permutation witness as well.
    pub seed_witness: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { runs: Vec::new(), seed: 0, workers: 0, deterministic: false, shuffled: true, seed_witness: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub run: usize,
    pub g_id: String,
    pub h_id: String,
    pub shuffled: bool,
    pub seed: u64,
    pub upper_bound: f64,
    pub seconds: f64,
}

/// Means per run: `d` over ordinary pairs, `d_hat` over shuffled copies and
/// `t` over all rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub run: usize,
    pub pairs: usize,
    pub shuffled: usize,
    pub d: Option<f64>,
    pub d_hat: Option<f64>,
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub runs: Vec<RunSpec>,
    pub records: Vec<PairRecord>,
    pub aggregates: Vec<Aggregate>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

impl ExperimentReport {
    pub fn aggregate(run_count: usize, records: &[PairRecord]) -> Vec<Aggregate> {
        (0..run_count)
            .map(|run| {
                let rows = || records.iter().filter(move |r| r.run == run);
                Aggregate {
                    run,
                    pairs: rows().filter(|r| !r.shuffled).count(),
                    shuffled: rows().filter(|r| r.shuffled).count(),
                    d: mean(rows().filter(|r| !r.shuffled).map(|r| r.upper_bound)),
                    d_hat: mean(rows().filter(|r| r.shuffled).map(|r| r.upper_bound)),
                    t: mean(rows().map(|r| r.seconds)),
                }
            })
            .collect()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let fail = |e: csv::Error| GedError::io("csv", e);
        w.write_record(CSV_HEADER).map_err(fail)?;
        for r in &self.records {
            let mut row = vec![r.g_id.clone(), r.h_id.clone()];
            row.extend(self.runs[r.run].columns());
            row.push(r.seed.to_string());
            row.push(r.upper_bound.to_string());
            row.push(format!("{:.6}", r.seconds));
            w.write_record(&row).map_err(fail)?;
        }
        w.flush().map_err(|e| GedError::io("csv", e))
    }

    pub fn write_summary(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let fail = |e: csv::Error| GedError::io("csv", e);
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        w.write_record(SUMMARY_HEADER).map_err(fail)?;
        for a in &self.aggregates {
            let mut row: Vec<String> = self.runs[a.run].columns().into();
            row.extend([
                a.pairs.to_string(),
                a.shuffled.to_string(),
                opt(a.d),
                opt(a.d_hat),
                a.t.map(|t| format!("{t:.6}")).unwrap_or_default(),
            ]);
            w.write_record(&row).map_err(fail)?;
        }
        w.flush().map_err(|e| GedError::io("csv", e))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

struct Instance {
    g: LabeledGraph,
    h: LabeledGraph,
    witness: Option<NodeMap>,
}

fn shuffled_copy(g: &LabeledGraph, seed: u64) -> Result<(LabeledGraph, NodeMap)> {
    let mut perm: Vec<usize> = (0..g.order()).collect();
    perm.shuffle(&mut seeds::rng(seeds::keyed(seed, &[g.id(), "~shuffle"])));
    permute_graph(g, &perm)
}

/// Runs every configuration on all unordered pairs of `dataset` and, if
/// enabled, on each graph against a shuffled copy of itself.
pub fn run_experiment(
    dataset: &[LabeledGraph],
    config: &ExperimentConfig,
    costs: &EditCostModel,
) -> Result<ExperimentReport> {
    if config.runs.is_empty() {
        return Err(GedError::InvalidParameter("no algorithm configuration given".into()));
    }
    for spec in &config.runs {
        spec.multistart.validate()?;
    }
    let mut instances = Vec::new();
    for (i, g) in dataset.iter().enumerate() {
        for h in &dataset[i + 1..] {
            instances.push(Instance { g: g.clone(), h: h.clone(), witness: None });
        }
    }
    if config.shuffled {
        for g in dataset {
            let (h, witness) = shuffled_copy(g, config.seed)?;
            instances.push(Instance { g: g.clone(), h, witness: Some(witness) });
        }
    }
    let jobs: Vec<(usize, &Instance)> =
        (0..config.runs.len()).flat_map(|run| instances.iter().map(move |inst| (run, inst))).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| GedError::InvalidParameter(format!("worker pool: {e}")))?;
    let records = pool.install(|| {
        jobs.par_iter()
            .map(|&(run, inst)| {
                let spec = &config.runs[run];
                let seed = seeds::keyed(config.seed, &[inst.g.id(), inst.h.id()]);
                let ms = MultistartConfig {
                    seed,
                    deterministic: spec.multistart.deterministic || config.deterministic,
                    ..spec.multistart.clone()
                };
                let seeded: Vec<NodeMap> = match (&inst.witness, config.seed_witness) {
                    (Some(w), true) => vec![w.clone()],
                    _ => Vec::new(),
                };
                let start = Instant::now();
                let outcome = randpost_seeded(&inst.g, &inst.h, &ms, &spec.search, costs, &seeded)?;
                let seconds = if config.deterministic { 0.0 } else { start.elapsed().as_secs_f64() };
                log::debug!("{} vs {}: ub {}", inst.g.id(), inst.h.id(), outcome.upper_bound);
                Ok(PairRecord {
                    run,
                    g_id: inst.g.id().to_string(),
                    h_id: inst.h.id().to_string(),
                    shuffled: inst.witness.is_some(),
                    seed,
                    upper_bound: outcome.upper_bound,
                    seconds,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let aggregates = ExperimentReport::aggregate(config.runs.len(), &records);
    Ok(ExperimentReport { runs: config.runs.clone(), records, aggregates })
}
