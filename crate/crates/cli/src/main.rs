//! `coarsen`: command-line harness for graph coarsening experiments.
//!
//! Exit codes: 0 on success, 1 on IO, parse or evaluation failures (and on
//! violated bounds with `eval --strict`), 2 on an infeasible target size.

mod bench;
mod experiment;
mod graphs;
mod output;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_coarsen::coarsening::{load_hierarchy, save_hierarchy};
use graph_coarsen::graph::io::{save_graph, GraphFormat};
use graph_coarsen::{run_method, Hierarchy, Method};

use crate::bench::{growth_ratios, run_bench, write_bench_csv, BenchConfig};
use crate::experiment::{run_grid, target_size, EvalRow, ExperimentConfig, Format, Infeasible};
use crate::graphs::GraphSpec;
use crate::output::{fmt_float, sink, write_rows};

#[derive(Parser)]
#[command(
    name = "coarsen",
    version,
    about = "Spectrum-preserving graph coarsening"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coarsen one graph and write the hierarchy as JSON.
    Coarsen(CoarsenArgs),
    /// Measure a stored hierarchy against its base graph.
    Eval(EvalArgs),
    /// Run a graphs x methods x ratios x ks grid and emit one row per cell.
    Grid(GridArgs),
    /// Time methods on random regular graphs of doubling size.
    Bench(BenchArgs),
    /// Pivot a results file into a graph x ratio by method table.
    Table(TableArgs),
    /// Write a generated graph to a file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct CoarsenArgs {
    /// Graph file (.mtx or edge list) or generator spec (regular:N:D:SEED, er:N:P:SEED).
    #[arg(long)]
    input: GraphSpec,
    #[arg(long, default_value = "local-var-edge")]
    method: Method,
    /// Reduction ratio r = 1 - n/N.
    #[arg(long)]
    ratio: f64,
    /// Preserved eigenspace dimension.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Stop once the accumulated error bound would exceed this value.
    #[arg(long, default_value_t = f64::INFINITY)]
    eps_threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hierarchy JSON destination.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Base graph the hierarchy was built from.
    #[arg(long)]
    input: GraphSpec,
    #[arg(long)]
    hierarchy: PathBuf,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Exit with status 1 when a bound check fails.
    #[arg(long)]
    strict: bool,
    /// Add a wall_ms column (makes the output non-deterministic).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// JSON experiment config; replaces the grid flags below.
    #[arg(long, conflicts_with_all = ["graph", "method", "ratio"])]
    config: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    graph: Vec<GraphSpec>,
    #[arg(long, num_args = 1..)]
    method: Vec<Method>,
    #[arg(long, num_args = 1..)]
    ratio: Vec<f64>,
    #[arg(long, num_args = 1.., default_values_t = [10])]
    k: Vec<usize>,
    #[arg(long, default_value_t = f64::INFINITY)]
    eps_threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Add a wall_ms column (makes the output non-deterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, num_args = 1.., default_values_t = [Method::LocalVarEdge])]
    method: Vec<Method>,
    /// Smallest size as log2 of the edge count.
    #[arg(long, default_value_t = 10)]
    min_exp: u32,
    #[arg(long, default_value_t = 14)]
    max_exp: u32,
    #[arg(long, default_value_t = 10)]
    degree: usize,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Time budget per method and size, in seconds.
    #[arg(long, default_value_t = 100.0)]
    cap: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct TableArgs {
    /// Results CSV written by `grid`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "eig_err")]
    metric: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec (regular:N:D:SEED, er:N:P:SEED).
    #[arg(long)]
    graph: GraphSpec,
    /// Destination; `.mtx` selects MatrixMarket, anything else an edge list.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(err) = configure_threads() {
        eprintln!("error: {err:#}");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Coarsen(a) => cmd_coarsen(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Table(a) => cmd_table(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<Infeasible>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// `COARSEN_THREADS` sets the worker pool size for grid cells.
fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("COARSEN_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("COARSEN_THREADS='{v}' is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn cmd_coarsen(a: CoarsenArgs) -> Result<ExitCode> {
    let l = a.input.laplacian()?;
    let n_target = target_size(l.dim(), a.ratio)?;
    let mut h = run_method(&l, a.method, n_target, a.k, a.eps_threshold, a.seed)?;
    h.set_meta("graph", a.input.to_string());
    h.set_meta("method", a.method.tag());
    h.set_meta("ratio", fmt_float(a.ratio));
    h.set_meta("k", a.k.to_string());
    h.set_meta("seed", a.seed.to_string());
    save_hierarchy(&h, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    print_summary(&h, n_target);
    if h.shortfall() > 0 && a.eps_threshold == f64::INFINITY {
        return Err(Infeasible(format!(
            "{} stopped at {} vertices, above the target {n_target}",
            a.method,
            h.n_coarse()
        ))
        .into());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(h: &Hierarchy, n_target: usize) {
    let sizes: Vec<String> = h.sizes().iter().map(|s| s.to_string()).collect();
    println!("levels: {}", h.n_levels());
    println!("sizes: {}", sizes.join(" -> "));
    let sigmas: Vec<String> = h
        .levels()
        .iter()
        .map(|lv| lv.sigma.map_or("-".into(), |s| format!("{s:.6}")))
        .collect();
    if !sigmas.is_empty() {
        println!("sigma: {}", sigmas.join(", "));
    }
    match h.eps_bound() {
        Some(e) => println!("eps bound: {e:.6}"),
        None => println!("eps bound: none"),
    }
    match h.shortfall() {
        0 => println!("target: {n_target} (reached)"),
        s => println!("target: {n_target} (shortfall {s})"),
    }
}

fn cmd_eval(a: EvalArgs) -> Result<ExitCode> {
    if a.k == 0 {
        bail!("k must be at least 1");
    }
    let l = a.input.laplacian()?;
    let h = load_hierarchy(&a.hierarchy, &l)
        .with_context(|| format!("loading {}", a.hierarchy.display()))?;
    let method = h.meta().get("method").cloned().unwrap_or_else(|| {
        h.levels()
            .first()
            .map_or("identity".to_string(), |lv| lv.method.clone())
    });
    let ratio = 1.0 - h.n_coarse() as f64 / h.n_fine() as f64;
    let start = Instant::now();
    let mut row = EvalRow::measure(&a.input.label(), &method, ratio, a.k, &h);
    row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    let mut out = sink(a.out.as_deref())?;
    write_rows(&mut *out, std::slice::from_ref(&row), a.format, a.timing)?;
    out.flush()?;
    if row.status.starts_with("error") {
        bail!("evaluation failed: {}", row.status);
    }
    if a.strict && row.bounds_ok == Some(false) {
        eprintln!("error: a bound check failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_grid(a: GridArgs) -> Result<ExitCode> {
    let mut config = match &a.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let c = ExperimentConfig {
                graphs: a.graph,
                methods: a.method,
                ratios: a.ratio,
                ks: a.k,
                eps_threshold: a.eps_threshold,
                seed: a.seed,
                output: None,
                format: Format::Csv,
            };
            c.validate()?;
            c
        }
    };
    if let Some(out) = a.out {
        config.output = Some(out);
    }
    if let Some(f) = a.format {
        config.format = f;
    }
    let rows = run_grid(&config)?;
    for r in rows.iter().filter(|r| r.status != "ok") {
        log::warn!(
            "{} / {} / r={} / k={}: {}",
            r.graph,
            r.method,
            r.ratio,
            r.k,
            r.status
        );
    }
    let mut out = sink(config.output.as_deref())?;
    write_rows(&mut *out, &rows, config.format, a.timing)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode> {
    if a.cap.is_nan() || a.cap <= 0.0 {
        bail!("cap must be positive");
    }
    let config = BenchConfig {
        methods: a.method,
        min_exp: a.min_exp,
        max_exp: a.max_exp,
        degree: a.degree,
        ratio: a.ratio,
        k: a.k,
        reps: a.reps,
        cap: Duration::from_secs_f64(a.cap),
        seed: a.seed,
    };
    let rows = run_bench(&config)?;
    let mut out = sink(a.out.as_deref())?;
    write_bench_csv(&mut *out, &rows)?;
    out.flush()?;
    for (method, edges, ratio) in growth_ratios(&rows) {
        eprintln!("{method} at {edges} edges: {ratio:.2}x the previous size");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(a: TableArgs) -> Result<ExitCode> {
    let file =
        std::fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let t = table::pivot(file, &a.metric).with_context(|| format!("in {}", a.input.display()))?;
    let missing = t.missing();
    if !missing.is_empty() {
        eprintln!("warning: {} missing cells", missing.len());
        for (row, method) in &missing {
            eprintln!(
                "  graph={} ratio={} k={} method={}",
                row.graph, row.ratio, row.k, method
            );
        }
    }
    let mut out = sink(a.out.as_deref())?;
    match a.format {
        TableFormat::Text => table::write_text(&mut *out, &t)?,
        TableFormat::Csv => table::write_csv(&mut *out, &t)?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode> {
    if matches!(a.graph, GraphSpec::File(_)) {
        bail!("'{}' is not a generator spec", a.graph);
    }
    let g = a.graph.build()?;
    write_graph(&g, &a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn write_graph(g: &graph_coarsen::WeightedGraph, path: &Path) -> Result<()> {
    save_graph(g, path, GraphFormat::from_path(path))
        .with_context(|| format!("writing {}", path.display()))
}
