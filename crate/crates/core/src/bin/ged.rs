use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ged_core::exact::exact_ged;
use ged_core::io::{
    generate_dataset, load_dataset, run_experiment, serialize_text_all, ExperimentConfig, Format, RunSpec,
};
use ged_core::ipfp::IpfpConfig;
use ged_core::multistart::{InitStrategy, LocalSearch, MultistartConfig};
use ged_core::{EditCostModel, GedError, RefineConfig, Result};

#[derive(Parser)]
#[command(name = "ged", version, about = "Graph edit distance upper bounds by local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run local searches on all pairs of a dataset and write a CSV report.
    Run(RunArgs),
    /// Exact distances for all pairs of a small-graph dataset.
    Exact(ExactArgs),
    /// Write a synthetic dataset in the text format.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Gxl,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlgorithmArg {
    Refine,
    KRefine,
    Ipfp,
    BpBeam,
    IbpBeam,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Random,
    NodeCostLsape,
    Mixed,
}

#[derive(Args)]
struct DatasetArgs {
    /// Graph file or directory.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// `constant:<sub>,<del>,<ins>` or `table:<file>`.
    #[arg(long, default_value = "constant:3,1,1")]
    costs: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Repeat to compare several algorithms.
    #[arg(long, value_enum, default_value = "k-refine")]
    algorithm: Vec<AlgorithmArg>,
    /// Largest swap size for k-refine.
    #[arg(long = "K", default_value_t = 2)]
    k: usize,
    /// Disable the (ε,ε) assignment in k-refine.
    #[arg(long)]
    no_dummy: bool,
    #[arg(long, default_value_t = 40)]
    kappa: usize,
    /// Comma-separated; paired with --loops.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    rho: Vec<f64>,
    /// Comma-separated RANDPOST loop counts; paired with --rho.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    loops: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Lower bound used in score weights.
    #[arg(long, default_value_t = 0.0)]
    lb: f64,
    #[arg(long, default_value_t = 5)]
    beam: usize,
    #[arg(long, default_value_t = 10)]
    orderings: usize,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long, value_enum, default_value = "random")]
    init: InitArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Reproducible output: results by index, zero timings.
    #[arg(long)]
    deterministic: bool,
    /// Skip graph-vs-shuffled-copy pairs.
    #[arg(long)]
    no_shuffled: bool,
    /// Also start shuffled-copy runs from the permutation witness.
    #[arg(long)]
    seed_witness: bool,
    /// Write per-configuration means (d, d_hat, t) to this CSV file.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    data: DatasetArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 10)]
    nodes: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 3)]
    alphabet: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "g")]
    prefix: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| GedError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load(args: &DatasetArgs) -> Result<(Vec<ged_core::LabeledGraph>, EditCostModel)> {
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Gxl => Format::Gxl,
    };
    Ok((load_dataset(&args.dataset, format)?, EditCostModel::from_spec(&args.costs)?))
}

fn search(alg: AlgorithmArg, args: &RunArgs) -> LocalSearch {
    match alg {
        AlgorithmArg::Refine => LocalSearch::Refine(RefineConfig::refine()),
        AlgorithmArg::KRefine => LocalSearch::Refine(RefineConfig::k_refine(args.k).with_dummy(!args.no_dummy)),
        AlgorithmArg::Ipfp => {
            LocalSearch::Ipfp(IpfpConfig { epsilon: args.epsilon, max_iterations: args.max_iters })
        }
        AlgorithmArg::BpBeam => LocalSearch::BpBeam { beam_width: args.beam },
        AlgorithmArg::IbpBeam => LocalSearch::IbpBeam { beam_width: args.beam, num_orderings: args.orderings },
    }
}

fn schedule(args: &RunArgs) -> Result<Vec<(usize, f64)>> {
    let (l, r) = (&args.loops, &args.rho);
    match (l.len(), r.len()) {
        (a, b) if a == b => Ok(l.iter().copied().zip(r.iter().copied()).collect()),
        (1, _) => Ok(r.iter().map(|&rho| (l[0], rho)).collect()),
        (_, 1) => Ok(l.iter().map(|&loops| (loops, r[0])).collect()),
        (a, b) => Err(GedError::InvalidParameter(format!("--loops has {a} values but --rho has {b}"))),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let (dataset, costs) = load(&args.data)?;
    let init = match args.init {
        InitArg::Random => InitStrategy::Random,
        InitArg::NodeCostLsape => InitStrategy::NodeCostLsape,
        InitArg::Mixed => InitStrategy::Mixed,
    };
    let mut runs = Vec::new();
    for &alg in &args.algorithm {
        for (loops, rho) in schedule(&args)? {
            let multistart = MultistartConfig {
                kappa: args.kappa,
                rho,
                num_loops: loops,
                eta: args.eta,
                lower_bound: args.lb,
                seed: args.seed,
                init,
                deterministic: args.deterministic,
            };
            runs.push(RunSpec { search: search(alg, &args), multistart });
        }
    }
    let config = ExperimentConfig {
        runs,
        seed: args.seed,
        workers: args.workers,
        deterministic: args.deterministic,
        shuffled: !args.no_shuffled,
        seed_witness: args.seed_witness,
    };
    let report = run_experiment(&dataset, &config, &costs)?;
    report.write_csv(output(args.data.out.as_deref())?)?;
    if let Some(path) = &args.summary {
        report.write_summary(output(Some(path))?)?;
    }
    Ok(())
}

fn exact(args: ExactArgs) -> Result<()> {
    let (dataset, costs) = load(&args.data)?;
    let mut w = csv::Writer::from_writer(output(args.data.out.as_deref())?);
    let fail = |e: csv::Error| GedError::Io { path: "csv".into(), message: e.to_string() };
    w.write_record(["g_id", "h_id", "ged"]).map_err(fail)?;
    for (i, g) in dataset.iter().enumerate() {
        for h in &dataset[i + 1..] {
            let (value, _) = exact_ged(g, h, &costs)?;
            w.write_record([g.id(), h.id(), &value.to_string()]).map_err(fail)?;
        }
    }
    w.flush().map_err(|e| GedError::Io { path: "csv".into(), message: e.to_string() })
}

fn gen(args: GenArgs) -> Result<()> {
    let graphs = generate_dataset(&args.prefix, args.count, args.nodes, args.density, args.alphabet, args.seed)?;
    let text = serialize_text_all(&graphs)?;
    let mut out = output(args.out.as_deref())?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| GedError::Io { path: "output".into(), message: e.to_string() })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Exact(args) => exact(args),
        Command::Gen(args) => gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
