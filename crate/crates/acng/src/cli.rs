//! Command-line surface: flag definitions and the command bodies.

use std::io::Write;
use std::path::{Path, PathBuf};

use acng_core::construction::{finish, prepare, CngParams};
use acng_core::eval::{compute_ground_truth, sweep, tune_tau, TuneConfig};
use acng_core::exact::{
    build_exact, verify_alpha_reducible, verify_mutual_exclusion, verify_shortcut_reachable,
    ExactBuildParams,
};
use acng_core::knn::KnnParams;
use acng_core::stats::compute_stats;
use acng_core::{synth, Dataset, PruneRule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::{io, report};

#[derive(Debug, Parser)]
#[command(
    name = "acng",
    version,
    about = "Build, search, and check alpha-convergent proximity graphs"
)]
pub struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph from an fvecs file.
    Build(BuildArgs),
    /// Compute exact k-NN ground truth as ivecs.
    Gt(GtArgs),
    /// Sweep queue sizes and write recall / NDC / hops as CSV.
    Search(SearchArgs),
    /// Print diameter, minimum distance, and aspect ratio as JSON.
    Stats(StatsArgs),
    /// Check an exact graph's structural guarantees.
    Verify(VerifyArgs),
    /// Pick tau by grid search on a query set.
    Tune(TuneArgs),
    /// Write a synthetic dataset.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleKind {
    /// Shifted-scaled rule (adaptive unless --fixed-alpha is given).
    Alpha,
    Triangle,
    Scaled,
    Shifted,
}

/// Construction flags shared by `build` and `tune`.
#[derive(Debug, Clone, Args)]
pub struct BuildFlags {
    /// Base K-NN graph degree.
    #[arg(long = "K", default_value_t = 200)]
    pub knn_k: usize,
    /// Maximum out-degree.
    #[arg(long = "M", default_value_t = 70)]
    pub m: usize,
    /// Construction queue size.
    #[arg(long = "L", default_value_t = 60)]
    pub l: usize,
    /// Candidate-set size.
    #[arg(long = "C", default_value_t = 500)]
    pub c: usize,
    #[arg(long, default_value_t = 0.9)]
    pub alpha0: f64,
    #[arg(long = "alpha-max", default_value_t = 1.6)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dalpha: f64,
    /// Prune once at this alpha instead of adaptively.
    #[arg(long = "fixed-alpha")]
    pub fixed_alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = RuleKind::Alpha)]
    pub rule: RuleKind,
    /// Alpha for `--rule scaled` and for exact builds (default 1.2).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// NN-descent rounds (used above --knn-exact-threshold points).
    #[arg(long = "knn-iters", default_value_t = 10)]
    pub knn_iters: usize,
    /// NN-descent sampling rate.
    #[arg(long = "sample-rate", default_value_t = 0.5)]
    pub sample_rate: f64,
    /// Use the exact K-NN graph up to this many points.
    #[arg(long = "knn-exact-threshold", default_value_t = 10_000)]
    pub knn_exact_threshold: usize,
}

const DEFAULT_ALPHA: f64 = 1.2;

impl BuildFlags {
    fn cng_params(&self, tau: f64) -> CngParams {
        let rule_override = match self.rule {
            RuleKind::Alpha => None,
            other => Some(self.rule(other, tau)),
        };
        CngParams {
            knn: KnnParams {
                k: self.knn_k,
                iters: self.knn_iters,
                sample_rate: self.sample_rate,
                seed: self.seed,
                exact_threshold: self.knn_exact_threshold,
            },
            max_degree: self.m,
            queue_size: self.l,
            candidate_size: self.c,
            alpha0: self.alpha0,
            alpha_max: self.alpha_max,
            d_alpha: self.dalpha,
            tau,
            fixed_alpha: self.fixed_alpha,
            rule_override,
            seed: self.seed,
        }
    }

    fn rule(&self, kind: RuleKind, tau: f64) -> PruneRule {
        let alpha = self.alpha.unwrap_or(DEFAULT_ALPHA);
        match kind {
            RuleKind::Alpha => PruneRule::ShiftedScaled { alpha, tau },
            RuleKind::Triangle => PruneRule::Triangle,
            RuleKind::Scaled => PruneRule::Scaled { alpha },
            RuleKind::Shifted => PruneRule::Shifted { tau },
        }
    }

    fn check(&self, exact: bool) -> CliResult<()> {
        if !exact && self.rule == RuleKind::Alpha && self.alpha.is_some() {
            return Err(CliError::Usage(
                "--alpha applies to --rule scaled and --exact builds; use --fixed-alpha for a single-alpha build".into(),
            ));
        }
        if !exact && self.rule != RuleKind::Alpha && self.fixed_alpha.is_some() {
            return Err(CliError::Usage(
                "--fixed-alpha only applies to --rule alpha".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Output graph file.
    #[arg(long)]
    pub out: PathBuf,
    /// Build-report JSON path; printed to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Include wall-clock phase timings in the report.
    #[arg(long)]
    pub timings: bool,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Quadratic reference build over all points.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub flags: BuildFlags,
}

#[derive(Debug, Args)]
pub struct GtArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    /// Ground truth ivecs.
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    /// Comma-separated queue sizes.
    #[arg(long = "L-list", value_delimiter = ',', required = true)]
    pub l_list: Vec<usize>,
    /// CSV path; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Queries for the reducibility check; each must lie within tau of its
    /// nearest data point.
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    /// Fraction of the queries (taken from the front) used for tuning.
    #[arg(long = "dev-split", default_value_t = 1.0)]
    pub dev_split: f64,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long = "target-recall", default_value_t = 0.9)]
    pub target_recall: f64,
    /// Comma-separated queue sizes evaluated per candidate tau.
    #[arg(
        long = "L-list",
        value_delimiter = ',',
        default_value = "10,20,40,60,80,100,150,200,300"
    )]
    pub l_list: Vec<usize>,
    /// Comma-separated non-zero coarse grid.
    #[arg(long, value_delimiter = ',', default_value = "10,1,0.1,0.01,0.001")]
    pub coarse: Vec<f64>,
    /// Write the graph built at the chosen tau here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tuning-report JSON path; printed to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub flags: BuildFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Uniform in [lo, hi)^dim.
    Uniform,
    /// 128-dim SIFT-like mixture; writes base to --out and queries to --queries-out.
    Sift,
    /// Points of --source moved by at most --radius.
    Perturb,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f32,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f32,
    #[arg(long = "queries-out")]
    pub queries_out: Option<PathBuf>,
    #[arg(long = "n-queries", default_value_t = 100)]
    pub n_queries: usize,
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs one parsed command, writing any console output to `out`.
pub fn run(command: &Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Build(args) => cmd_build(args, out),
        Command::Gt(args) => cmd_gt(args),
        Command::Search(args) => cmd_search(args, out),
        Command::Stats(args) => cmd_stats(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Tune(args) => cmd_tune(args, out),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => io::write_text(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}

fn check_dims(data: &Dataset, other: &Dataset, what: &str) -> CliResult<()> {
    if data.dim() != other.dim() {
        return Err(CliError::Usage(format!(
            "{what} have dimension {} but the data has {}",
            other.dim(),
            data.dim()
        )));
    }
    Ok(())
}

fn cmd_build(args: &BuildArgs, out: &mut dyn Write) -> CliResult<()> {
    args.flags.check(args.exact)?;
    if args.exact {
        let rule = args.flags.rule(args.flags.rule, args.tau);
        rule.validate()?;
        let data = io::read_fvecs(&args.data)?;
        let graph = build_exact(&data, &ExactBuildParams::new(rule))?;
        io::write_graph(&args.out, &graph)?;
        let summary = json!({
            "mode": "exact",
            "rule": rule,
            "n": graph.len(),
            "edges": graph.edge_count(),
            "max_out_degree": graph.observed_max_degree(),
            "entry_point": graph.entry_point(),
        });
        return emit(out, args.report.as_deref(), &report::json(&summary));
    }

    let params = args.flags.cng_params(args.tau);
    params.validate()?;
    let data = io::read_fvecs(&args.data)?;
    params.knn.validate(data.len())?;
    let prepared = prepare(&data, &params)?;
    let (graph, build_report) = finish(&data, &prepared, &params)?;
    io::write_graph(&args.out, &graph)?;
    let mut report_value = serde_json::to_value(&build_report).expect("report serializes");
    if !args.timings {
        report_value
            .as_object_mut()
            .expect("object")
            .remove("timings");
    }
    let summary = json!({
        "mode": "cng",
        "params": params,
        "report": report_value,
    });
    emit(out, args.report.as_deref(), &report::json(&summary))
}

fn cmd_gt(args: &GtArgs) -> CliResult<()> {
    let data = io::read_fvecs(&args.data)?;
    let queries = io::read_fvecs(&args.queries)?;
    check_dims(&data, &queries, "queries")?;
    let truth = compute_ground_truth(&data, &queries, args.k)?;
    io::write_ground_truth(&args.out, &truth)
}

fn cmd_search(args: &SearchArgs, out: &mut dyn Write) -> CliResult<()> {
    if let Some(&l) = args.l_list.iter().find(|&&l| l < args.k) {
        return Err(CliError::Usage(format!(
            "queue size {l} in --L-list is below k = {}",
            args.k
        )));
    }
    let data = io::read_fvecs(&args.data)?;
    let graph = io::read_graph(&args.graph)?;
    let queries = io::read_fvecs(&args.queries)?;
    let truth = io::read_ground_truth(&args.gt)?;
    check_dims(&data, &queries, "queries")?;
    if graph.len() != data.len() {
        return Err(CliError::Usage(format!(
            "graph has {} vertices but the data has {} points",
            graph.len(),
            data.len()
        )));
    }
    let records = sweep(&graph, &data, &queries, &truth, args.k, &args.l_list)?;
    emit(out, args.out.as_deref(), &report::eval_csv(&records))
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> CliResult<()> {
    let data = io::read_fvecs(&args.data)?;
    let stats = compute_stats(&data)?;
    let value = json!({
        "n": data.len(),
        "dim": data.dim(),
        "diameter": stats.diameter,
        "min_dist": stats.min_dist,
        "aspect_ratio": stats.aspect_ratio,
    });
    emit(out, args.out.as_deref(), &report::json(&value))
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let rule = PruneRule::ShiftedScaled {
        alpha: args.alpha,
        tau: args.tau,
    };
    rule.validate()?;
    let data = io::read_fvecs(&args.data)?;
    let graph = io::read_graph(&args.graph)?;
    if graph.len() != data.len() {
        return Err(CliError::Usage(format!(
            "graph has {} vertices but the data has {} points",
            graph.len(),
            data.len()
        )));
    }
    let mut first: Option<String> = None;

    let exclusion = verify_mutual_exclusion(&graph, &data, &rule)?;
    if let Some(v) = exclusion.first() {
        first.get_or_insert(format!(
            "mutual exclusion: at vertex {}, neighbor {} prunes neighbor {}",
            v.owner, v.nearer, v.farther
        ));
    }
    let shortcut = verify_shortcut_reachable(&graph, &data, args.alpha)?;
    if let Some(v) = shortcut.first() {
        first.get_or_insert(format!(
            "shortcut reachability: no out-neighbor of {} is within 1/alpha of {}",
            v.from, v.to
        ));
    }
    let reducible = match &args.queries {
        Some(path) => {
            let queries = io::read_fvecs(path)?;
            check_dims(&data, &queries, "queries")?;
            let found = verify_alpha_reducible(&graph, &data, &queries, args.tau, args.alpha)?;
            if let Some(v) = found.first() {
                first.get_or_insert(format!(
                    "reducibility: query {}, vertex {} at distance {} has no out-neighbor closer than {}",
                    v.query, v.vertex, v.distance, v.best_neighbor_distance
                ));
            }
            Some(found.len())
        }
        None => None,
    };
    let summary = json!({
        "mutual_exclusion_violations": exclusion.len(),
        "shortcut_violations": shortcut.len(),
        "reducibility_violations": reducible,
    });
    emit(out, None, &report::json(&summary))?;
    match first {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn cmd_tune(args: &TuneArgs, out: &mut dyn Write) -> CliResult<()> {
    args.flags.check(false)?;
    if !(args.dev_split > 0.0 && args.dev_split <= 1.0) {
        return Err(CliError::Usage("--dev-split must lie in (0, 1]".into()));
    }
    let base_params = args.flags.cng_params(0.0);
    base_params.validate()?;
    let data = io::read_fvecs(&args.data)?;
    let all_queries = io::read_fvecs(&args.queries)?;
    check_dims(&data, &all_queries, "queries")?;
    base_params.knn.validate(data.len())?;

    let n_dev =
        ((all_queries.len() as f64 * args.dev_split).ceil() as usize).clamp(1, all_queries.len());
    let dev_ids: Vec<u32> = (0..n_dev as u32).collect();
    let dev = all_queries.subset(&dev_ids)?;
    let truth = compute_ground_truth(&data, &dev, args.k)?;
    let config = TuneConfig {
        coarse: args.coarse.clone(),
        target_recall: args.target_recall,
        k: args.k,
        queue_sizes: args.l_list.clone(),
    };

    let prepared = prepare(&data, &base_params)?;
    let choice = tune_tau(&data, &dev, &truth, &config, |tau| {
        let params = CngParams { tau, ..base_params };
        finish(&data, &prepared, &params).map(|(g, _)| g)
    })?;
    if let Some(path) = &args.out {
        let params = CngParams {
            tau: choice.tau,
            ..base_params
        };
        let (graph, _) = finish(&data, &prepared, &params)?;
        io::write_graph(path, &graph)?;
    }
    let summary = json!({
        "dev_queries": n_dev,
        "tau": choice.tau,
        "target_reached": choice.target_reached,
        "evaluations": choice.evaluations,
    });
    emit(out, args.report.as_deref(), &report::json(&summary))
}

fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    match args.kind {
        GenKind::Uniform => {
            let data = synth::uniform(args.n, args.dim, args.lo, args.hi, args.seed)?;
            io::write_fvecs(&args.out, &data)
        }
        GenKind::Sift => {
            let queries_out = args
                .queries_out
                .as_ref()
                .ok_or_else(|| CliError::Usage("--kind sift needs --queries-out".into()))?;
            let (base, queries) = synth::sift_like(args.n, args.n_queries, args.seed)?;
            io::write_fvecs(&args.out, &base)?;
            io::write_fvecs(queries_out, &queries)
        }
        GenKind::Perturb => {
            let source = args
                .source
                .as_ref()
                .ok_or_else(|| CliError::Usage("--kind perturb needs --source".into()))?;
            let data = io::read_fvecs(source)?;
            let (queries, _) = synth::perturbed_queries(&data, args.n, args.radius, args.seed)?;
            io::write_fvecs(&args.out, &queries)
        }
    }
}
