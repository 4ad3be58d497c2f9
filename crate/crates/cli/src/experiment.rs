//! Experiment grids: configuration, target sizes and per-cell evaluation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use graph_coarsen::spectral::evaluate;
use graph_coarsen::{run_method, Hierarchy, Laplacian, Method};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphs::GraphSpec;

/// A target size that cannot be met; reported with exit code 2.
#[derive(Debug)]
pub struct Infeasible(pub String);

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "infeasible target: {}", self.0)
    }
}

impl std::error::Error for Infeasible {}

/// Coarse size for reduction ratio `r = 1 - n/N`, rounded to the nearest
/// integer.
pub fn target_size(n_fine: usize, ratio: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(Infeasible(format!("ratio {ratio} outside [0, 1)")).into());
    }
    let n = ((1.0 - ratio) * n_fine as f64).round() as usize;
    if n < 1 {
        return Err(Infeasible(format!("ratio {ratio} leaves no vertex of {n_fine}")).into());
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Error threshold in a config file: a positive number, or `null` / `"inf"`
/// for a fixed reduction without error control.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Threshold {
    Value(f64),
    Word(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    graphs: Vec<String>,
    methods: Vec<String>,
    ratios: Vec<f64>,
    ks: Vec<usize>,
    #[serde(default)]
    eps_threshold: Option<Threshold>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    format: Format,
}

/// Graphs x methods x ratios x ks, all run with one error threshold and
/// seed.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub graphs: Vec<GraphSpec>,
    pub methods: Vec<Method>,
    pub ratios: Vec<f64>,
    pub ks: Vec<usize>,
    pub eps_threshold: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile = serde_json::from_str(text).context("parsing experiment config")?;
        let eps_threshold = match file.eps_threshold {
            None => f64::INFINITY,
            Some(Threshold::Value(v)) => v,
            Some(Threshold::Word(w)) if matches!(w.as_str(), "inf" | "infinity") => f64::INFINITY,
            Some(Threshold::Word(w)) => bail!("eps_threshold '{w}' is not a number"),
        };
        let config = ExperimentConfig {
            graphs: file
                .graphs
                .iter()
                .map(|g| g.parse())
                .collect::<Result<_>>()?,
            methods: file
                .methods
                .iter()
                .map(|m| m.parse::<Method>())
                .collect::<Result<_, _>>()?,
            ratios: file.ratios,
            ks: file.ks,
            eps_threshold,
            seed: file.seed,
            output: file.output,
            format: file.format,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() || self.methods.is_empty() {
            bail!("config needs at least one graph and one method");
        }
        if self.ratios.is_empty() || self.ks.is_empty() {
            bail!("config needs at least one ratio and one k");
        }
        if let Some(r) = self.ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            bail!("ratio {r} outside (0, 1)");
        }
        if self.ratios.windows(2).any(|w| w[0] >= w[1]) {
            bail!("ratios must be strictly increasing");
        }
        if self.ks.contains(&0) {
            bail!("k must be at least 1");
        }
        if self.eps_threshold.is_nan() || self.eps_threshold <= 0.0 {
            bail!("eps_threshold must be positive");
        }
        Ok(())
    }
}

/// One evaluated grid cell. Metrics are empty when the run failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRow {
    pub graph: String,
    pub method: String,
    pub ratio: f64,
    pub k: usize,
    pub n_fine: usize,
    pub n_coarse: Option<usize>,
    pub epsilon: Option<f64>,
    pub eig_err: Option<f64>,
    pub sin_theta: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub bounds_ok: Option<bool>,
    /// `ok`, `shortfall` (target not reached) or `error: ...`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl EvalRow {
    fn empty(graph: &str, method: &str, ratio: f64, k: usize, n_fine: usize) -> Self {
        EvalRow {
            graph: graph.to_string(),
            method: method.to_string(),
            ratio,
            k,
            n_fine,
            n_coarse: None,
            epsilon: None,
            eig_err: None,
            sin_theta: None,
            gamma1: None,
            gamma2: None,
            bounds_ok: None,
            status: "ok".into(),
            wall_ms: None,
        }
    }

    /// Measures a hierarchy. The subspace size is capped at the coarse size.
    pub fn measure(graph: &str, method: &str, ratio: f64, k: usize, h: &Hierarchy) -> Self {
        let mut row = EvalRow::empty(graph, method, ratio, k, h.n_fine());
        row.n_coarse = Some(h.n_coarse());
        if h.shortfall() > 0 {
            row.status = "shortfall".into();
        }
        match evaluate(h, k.min(h.n_coarse())) {
            Ok(e) => {
                row.epsilon = Some(e.epsilon());
                row.eig_err = Some(e.eig_err);
                row.sin_theta = e.sin_theta;
                row.gamma1 = e.gamma1;
                row.gamma2 = e.gamma2;
                row.bounds_ok = Some(e.bounds_ok());
            }
            Err(err) => row.status = format!("error: {err}"),
        }
        row
    }

    fn sort_key(&self) -> (&str, usize, f64, usize) {
        let order = self.method.parse::<Method>().map_or(usize::MAX, |m| {
            Method::ALL.iter().position(|&x| x == m).unwrap()
        });
        (&self.graph, order, self.ratio, self.k)
    }
}

/// Canonical row order, independent of how the cells were scheduled.
pub fn sort_rows(rows: &mut [EvalRow]) {
    rows.sort_by(|a, b| {
        let (ga, ma, ra, ka) = a.sort_key();
        let (gb, mb, rb, kb) = b.sort_key();
        ga.cmp(gb)
            .then(ma.cmp(&mb))
            .then(a.method.cmp(&b.method))
            .then(ra.total_cmp(&rb))
            .then(ka.cmp(&kb))
    });
}

/// Coarsens and evaluates one cell. `wall_ms` covers the coarsening only.
pub fn run_cell(
    graph: &str,
    l: &Laplacian,
    method: Method,
    ratio: f64,
    k: usize,
    eps_threshold: f64,
    seed: u64,
) -> EvalRow {
    let n_target = match target_size(l.dim(), ratio) {
        Ok(n) => n,
        Err(err) => {
            let mut row = EvalRow::empty(graph, method.tag(), ratio, k, l.dim());
            row.status = format!("error: {err}");
            return row;
        }
    };
    let start = Instant::now();
    match run_method(l, method, n_target, k, eps_threshold, seed) {
        Ok(h) => {
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let mut row = EvalRow::measure(graph, method.tag(), ratio, k, &h);
            row.wall_ms = Some(wall);
            row
        }
        Err(err) => {
            let mut row = EvalRow::empty(graph, method.tag(), ratio, k, l.dim());
            row.status = format!("error: {err}");
            row
        }
    }
}

/// Runs every cell of the grid on the current thread pool and returns the
/// rows in canonical order.
pub fn run_grid(config: &ExperimentConfig) -> Result<Vec<EvalRow>> {
    let graphs: Vec<(String, Laplacian)> = config
        .graphs
        .iter()
        .map(|g| Ok((g.label(), g.laplacian()?)))
        .collect::<Result<_>>()?;
    let mut cells = Vec::new();
    for (gi, _) in graphs.iter().enumerate() {
        for &method in &config.methods {
            for &ratio in &config.ratios {
                for &k in &config.ks {
                    cells.push((gi, method, ratio, k));
                }
            }
        }
    }
    let mut rows: Vec<EvalRow> = cells
        .par_iter()
        .map(|&(gi, method, ratio, k)| {
            let (label, l) = &graphs[gi];
            run_cell(
                label,
                l,
                method,
                ratio,
                k,
                config.eps_threshold,
                config.seed,
            )
        })
        .collect();
    sort_rows(&mut rows);
    Ok(rows)
}
