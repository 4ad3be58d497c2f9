//! Runtime scaling on random regular graphs of doubling size.

use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use graph_coarsen::{run_method, Method};

use crate::experiment::target_size;
use crate::graphs::random_regular;
use crate::output::{fmt_float, BENCH_SCHEMA};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    /// Edge counts `2^e` for `e` in `min_exp..=max_exp`.
    pub min_exp: u32,
    pub max_exp: u32,
    pub degree: usize,
    pub ratio: f64,
    pub k: usize,
    pub reps: usize,
    /// Time budget per (method, size) cell.
    pub cap: Duration,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Mean over the completed repetitions; `None` when none ran.
    pub mean_ms: Option<f64>,
    pub reps: usize,
    /// The cap was hit, or an earlier size of the same method hit it.
    pub censored: bool,
}

/// Vertex count whose `degree`-regular graph has closest to `2^exp` edges.
fn vertices_for(exp: u32, degree: usize) -> usize {
    let n = ((1u64 << (exp + 1)) as f64 / degree as f64).round() as usize;
    if (n * degree) % 2 == 1 {
        n + 1
    } else {
        n
    }
}

/// Runs every method over every size. Once a method exceeds the cap, its
/// larger sizes are skipped and reported as censored.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    if config.min_exp > config.max_exp || config.reps == 0 {
        bail!("empty benchmark: need min_exp <= max_exp and reps >= 1");
    }
    let mut graphs = Vec::new();
    for exp in config.min_exp..=config.max_exp {
        let n = vertices_for(exp, config.degree);
        let g = random_regular(n, config.degree, config.seed.wrapping_add(exp as u64))?;
        graphs.push(g.laplacian());
    }
    let mut rows = Vec::new();
    for &method in &config.methods {
        let mut over_cap = false;
        for l in &graphs {
            let mut row = BenchRow {
                method,
                n_vertices: l.dim(),
                n_edges: l.n_edges(),
                mean_ms: None,
                reps: 0,
                censored: over_cap,
            };
            if !over_cap {
                let n_target = target_size(l.dim(), config.ratio)?;
                let mut total = Duration::ZERO;
                for rep in 0..config.reps {
                    let start = Instant::now();
                    run_method(
                        l,
                        method,
                        n_target,
                        config.k,
                        f64::INFINITY,
                        config.seed + rep as u64,
                    )?;
                    let elapsed = start.elapsed();
                    total += elapsed;
                    row.reps += 1;
                    if elapsed >= config.cap || total >= config.cap && rep + 1 < config.reps {
                        row.censored = true;
                        break;
                    }
                }
                row.mean_ms = Some(total.as_secs_f64() * 1e3 / row.reps as f64);
                over_cap = row.censored;
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_bench_csv(out: &mut dyn Write, rows: &[BenchRow]) -> Result<()> {
    writeln!(out, "{BENCH_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method",
        "n_vertices",
        "n_edges",
        "mean_ms",
        "reps",
        "censored",
    ])?;
    for r in rows {
        w.write_record([
            r.method.tag().to_string(),
            r.n_vertices.to_string(),
            r.n_edges.to_string(),
            r.mean_ms.map(fmt_float).unwrap_or_default(),
            r.reps.to_string(),
            r.censored.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Time ratios between consecutive uncensored sizes of each method.
pub fn growth_ratios(rows: &[BenchRow]) -> Vec<(Method, usize, f64)> {
    rows.windows(2)
        .filter(|w| w[0].method == w[1].method && !w[0].censored && !w[1].censored)
        .filter_map(|w| Some((w[1].method, w[1].n_edges, w[1].mean_ms? / w[0].mean_ms?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_hit_the_edge_counts() {
        assert_eq!(vertices_for(10, 10), 205);
        assert_eq!(vertices_for(12, 10), 819);
        assert_eq!(vertices_for(14, 4), 8192);
        assert_eq!(vertices_for(9, 3), 342);
    }
}
