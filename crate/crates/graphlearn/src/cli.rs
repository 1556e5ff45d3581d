//! Command-line front end: `learn`, `metrics` and `simulate`.
//!
//! Each command is also callable as a library function returning the process
//! exit code: 0 on success (for `learn`: converged), 2 when `learn` hits the
//! iteration cap (outputs are still written), 1 on any error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{self, GraphFile};
use crate::metrics::{self, NodeLabels};
use crate::ops;
use crate::preprocess::{self, ReturnsMatrix, SimilarityKind, SimilaritySpec};
use crate::solvers::{self, AdaptiveRho, DataTerm, InitMode, Method, SolverConfig};
use crate::synth;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "graphlearn", version, about = "Learn Laplacian-constrained graphs from time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a graph from a data CSV.
    Learn(LearnArgs),
    /// Report metrics for a graph JSON.
    Metrics(MetricsArgs),
    /// Write a planted graph and samples drawn from it.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Connected,
    K,
    T,
    Kt,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Connected => Method::ConnectedGaussian,
            MethodArg::K => Method::KGaussian,
            MethodArg::T => Method::ConnectedT,
            MethodArg::Kt => Method::Kt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimilarityArg {
    Correlation,
    Covariance,
    Nmi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Pinv,
    PinvNeg,
}

#[derive(Debug, Clone, Parser)]
pub struct LearnArgs {
    /// Data CSV (header of asset names, optional leading `date` column).
    #[arg(long)]
    pub input: PathBuf,
    /// Treat values as prices and convert to log-returns.
    #[arg(long)]
    pub prices: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Connected)]
    pub method: MethodArg,
    /// Number of components (methods k, kt).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Degrees of freedom (methods t, kt).
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Spectral penalty; defaults to 100 * mean |S|.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 5)]
    pub inner_iter: usize,
    /// Target degree: a number, or a file with one value per node.
    #[arg(long)]
    pub degree: Option<String>,
    #[arg(long, value_enum, default_value_t = SimilarityArg::Correlation)]
    pub similarity: SimilarityArg,
    /// Zero the leading eigenvalue of the similarity matrix.
    #[arg(long)]
    pub remove_market: bool,
    #[arg(long, value_enum, default_value_t = InitArg::PinvNeg)]
    pub init: InitArg,
    /// Grow rho by 10% whenever the augmented Lagrangian increases.
    #[arg(long)]
    pub adaptive_rho: bool,
    /// Recorded in the manifest; the solvers themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "graph.json")]
    pub out: PathBuf,
    /// Defaults to `<out>.trace.csv`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Parser)]
pub struct MetricsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// `node,label` CSV.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Reference graph for f-score and relative error.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long, default_value_t = metrics::EDGE_THRESHOLD)]
    pub threshold: f64,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Gaussian,
    T,
}

#[derive(Debug, Clone, Parser)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 30)]
    pub p: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 3000)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = DistArg::Gaussian)]
    pub dist: DistArg,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub intra_prob: f64,
    #[arg(long, default_value_t = 0.5)]
    pub weight_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub weight_max: f64,
    /// Rescale the planted weights so every degree is 1.
    #[arg(long)]
    pub unit_degrees: bool,
    #[arg(long, default_value = "planted.json")]
    pub out_graph: PathBuf,
    #[arg(long, default_value = "samples.csv")]
    pub out_data: PathBuf,
    #[arg(long)]
    pub out_labels: Option<PathBuf>,
}

/// Everything needed to rerun a `learn` invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub prices: bool,
    pub method: Method,
    pub config: SolverConfig,
    pub similarity: SimilaritySpec,
    pub seed: u64,
    pub observations: usize,
    pub dropped_rows: usize,
    pub graph: String,
    pub trace: String,
    pub converged: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Learn(a) => cmd_learn(&a),
        Command::Metrics(a) => cmd_metrics(&a),
        Command::Simulate(a) => cmd_simulate(&a),
    }
}

fn report<T>(r: Result<T>, ok: impl FnOnce(T) -> i32) -> i32 {
    match r {
        Ok(v) => ok(v),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into());
    out.with_file_name(format!("{stem}{suffix}"))
}

fn parse_degree(spec: &str, p: usize) -> Result<Vec<f64>> {
    if let Ok(v) = spec.trim().parse::<f64>() {
        return Ok(vec![v; p]);
    }
    let text = std::fs::read_to_string(spec)?;
    let vals: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .filter_map(|t| t.parse::<f64>().ok())
        .collect();
    if vals.len() != p {
        return Err(Error::Data(format!("--degree file {spec} has {} values, expected {p}", vals.len())));
    }
    Ok(vals)
}

/// Runs preprocessing and the solver, writes graph JSON, trace CSV and the
/// manifest.
pub fn cmd_learn(args: &LearnArgs) -> i32 {
    report(learn_inner(args), |converged| {
        if converged {
            EXIT_OK
        } else {
            eprintln!("warning: reached --max-iter {} without converging", args.max_iter);
            EXIT_NOT_CONVERGED
        }
    })
}

fn learn_inner(args: &LearnArgs) -> Result<bool> {
    let method: Method = args.method.into();
    if method.is_student_t() && args.nu.is_none() {
        return Err(Error::Parameter(format!("--nu is required for --method {}", method_flag(args.method))));
    }
    if method.is_k_component() && args.k < 1 {
        return Err(Error::Parameter("--k must be at least 1".into()));
    }
    let table = io::read_table(&args.input)?;
    if table.dropped > 0 {
        eprintln!("warning: dropped {} rows with missing values", table.dropped);
    }
    let returns = if args.prices {
        preprocess::log_returns(&table.values, table.names.clone(), table.timestamps.clone())?
    } else {
        ReturnsMatrix::new(table.values.clone(), table.names.clone(), table.timestamps.clone())?
    };
    let p = returns.p();
    let spec = SimilaritySpec {
        kind: match args.similarity {
            SimilarityArg::Correlation => SimilarityKind::Correlation,
            SimilarityArg::Covariance => SimilarityKind::Covariance,
            SimilarityArg::Nmi => SimilarityKind::Nmi,
        },
        market_removed: args.remove_market,
        scaled: args.similarity != SimilarityArg::Covariance,
    };
    let config = SolverConfig {
        rho: args.rho,
        eta: args.eta,
        nu: args.nu,
        k: args.k,
        degree_target: args.degree.as_deref().map(|d| parse_degree(d, p)).transpose()?,
        tol: args.tol,
        max_iter: args.max_iter,
        inner_iter: args.inner_iter,
        adaptive_rho: args.adaptive_rho.then(AdaptiveRho::default),
        init: match args.init {
            InitArg::Pinv => InitMode::Pinv,
            InitArg::PinvNeg => InitMode::PinvNeg,
        },
    };
    let names = Some(returns.names().to_vec());
    let est = if method.is_student_t() {
        if spec.kind == SimilarityKind::Nmi {
            return Err(Error::Parameter("--similarity nmi is not defined for Student-t methods".into()));
        }
        let x = if spec.is_scaled() { preprocess::scale_columns(&returns)? } else { returns.clone() };
        let mut x = x.into_values();
        if spec.market_removed {
            x = preprocess::remove_market_samples(&x)?;
        }
        solvers::learn(method, DataTerm::Samples(&x), &config, names)?
    } else {
        let s = preprocess::similarity(&returns, spec)?;
        solvers::learn(method, DataTerm::Scatter(&s), &config, names)?
    };

    let trace_path = args.trace.clone().unwrap_or_else(|| sibling(&args.out, ".trace.csv"));
    let manifest_path = args.manifest.clone().unwrap_or_else(|| sibling(&args.out, ".manifest.json"));
    GraphFile::from_estimate(&est)?.write(&args.out)?;
    io::write_trace(&trace_path, &est.trace)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: args.input.display().to_string(),
        prices: args.prices,
        method,
        config: est.config.clone(),
        similarity: spec,
        seed: args.seed,
        observations: returns.n(),
        dropped_rows: table.dropped,
        graph: args.out.display().to_string(),
        trace: trace_path.display().to_string(),
        converged: est.converged,
    };
    io::write_json(&manifest_path, &manifest)?;
    eprintln!(
        "{}: {} after {} iterations, {} edges",
        method,
        if est.converged { "converged" } else { "not converged" },
        est.iterations,
        est.weights.as_slice().iter().filter(|w| **w > io::EMIT_THRESHOLD).count()
    );
    Ok(est.converged)
}

fn method_flag(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Connected => "connected",
        MethodArg::K => "k",
        MethodArg::T => "t",
        MethodArg::Kt => "kt",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modularity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_distribution: Option<metrics::EdgeDistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fscore: Option<metrics::FScore>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
}

/// Computes the metrics report for `args` without printing.
pub fn metrics_report(args: &MetricsArgs) -> Result<MetricsReport> {
    let g = GraphFile::read(&args.graph)?;
    let w = g.weights()?;
    let adj = ops::adjacency_op(&w).into_inner();
    let mut rep = MetricsReport {
        nodes: g.p,
        edges: w.as_slice().iter().filter(|v| **v > args.threshold).count(),
        components: metrics::component_count(&adj, args.threshold),
        modularity: None,
        edge_distribution: None,
        fscore: None,
        relative_error: None,
    };
    if let Some(path) = &args.labels {
        let rows = io::read_labels(path)?;
        let lookup: std::collections::HashMap<&str, &str> = rows.iter().map(|(n, l)| (n.as_str(), l.as_str())).collect();
        let mut names = Vec::with_capacity(g.p);
        for node in &g.nodes {
            match lookup.get(node.as_str()) {
                Some(l) => names.push(*l),
                None => return Err(Error::Data(format!("node {node:?} has no entry in {}", path.display()))),
            }
        }
        let labels = NodeLabels::from_names(&names);
        rep.modularity = Some(metrics::modularity(&adj, &labels)?);
        rep.edge_distribution = Some(metrics::edge_distribution(&adj, &labels, args.threshold)?);
    }
    if let Some(path) = &args.compare {
        let r = GraphFile::read(path)?;
        if r.nodes != g.nodes {
            return Err(Error::Data(format!("{} and {} have different node lists", args.graph.display(), path.display())));
        }
        let rw = r.weights()?;
        rep.fscore = Some(metrics::edge_fscore(&w, &rw, args.threshold)?);
        rep.relative_error = Some(metrics::relative_error(&ops::laplacian_op(&w), &ops::laplacian_op(&rw))?);
    }
    Ok(rep)
}

pub fn cmd_metrics(args: &MetricsArgs) -> i32 {
    let r = metrics_report(args).and_then(|rep| {
        let text = serde_json::to_string_pretty(&rep)?;
        println!("{text}");
        if let Some(out) = &args.out {
            io::write_json(out, &rep)?;
        }
        Ok(())
    });
    report(r, |_| EXIT_OK)
}

pub fn cmd_simulate(args: &SimulateArgs) -> i32 {
    report(simulate_inner(args), |_| EXIT_OK)
}

fn simulate_inner(args: &SimulateArgs) -> Result<()> {
    let nu = match (args.dist, args.nu) {
        (DistArg::T, None) => return Err(Error::Parameter("--nu is required for --dist t".into())),
        (DistArg::T, Some(nu)) => Some(nu),
        (DistArg::Gaussian, _) => None,
    };
    if args.n == 0 {
        return Err(Error::Parameter("--n must be positive".into()));
    }
    let planted = synth::planted_k_component(args.p, args.k, args.intra_prob, (args.weight_min, args.weight_max), args.seed)?;
    let weights = if args.unit_degrees { synth::balance_degrees(&planted.weights)? } else { planted.weights.clone() };
    let l = ops::laplacian_op(&weights);
    let sample_seed = args.seed.wrapping_add(1);
    let x: DMatrix<f64> = match nu {
        Some(nu) => synth::sample_student_t(&l, nu, args.n, sample_seed)?,
        None => synth::sample_lgmrf(&l, args.n, sample_seed)?,
    };
    let names: Vec<String> = (0..args.p).map(|i| format!("x{i}")).collect();
    let config = serde_json::json!({
        "p": args.p, "k": args.k, "n": args.n, "dist": match args.dist { DistArg::Gaussian => "gaussian", DistArg::T => "t" },
        "nu": nu, "seed": args.seed, "intra_prob": args.intra_prob,
        "weight_range": [args.weight_min, args.weight_max], "unit_degrees": args.unit_degrees,
    });
    let mut file = GraphFile::from_weights(&weights, names.clone(), "planted", config)?;
    file.labels = Some(planted.partition.labels().to_vec());
    file.write(&args.out_graph)?;
    io::write_table(&args.out_data, &names, &x)?;
    if let Some(path) = &args.out_labels {
        io::write_labels(path, &names, planted.partition.labels())?;
    }
    Ok(())
}

