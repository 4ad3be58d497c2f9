//! Graph sources: files on disk and seeded random generators.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use graph_coarsen::graph::io::{load_graph, GraphFormat};
use graph_coarsen::{Laplacian, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full restarts of the pairing model before giving up.
const PAIRING_ATTEMPTS: usize = 1000;
/// Redraws of a stub pair before the current attempt is abandoned.
const PAIR_REDRAWS: usize = 100;

/// Where a graph comes from.
///
/// Generator specs are `regular:N:D:SEED` (uniform random D-regular graph)
/// and `er:N:P:SEED` (Erdos-Renyi with edge probability P). Anything else is
/// a path to a MatrixMarket (`.mtx`) or edge-list file.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSpec {
    File(PathBuf),
    Regular { n: usize, d: usize, seed: u64 },
    ErdosRenyi { n: usize, p: f64, seed: u64 },
}

impl FromStr for GraphSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let field = |i: usize, what: &str| -> Result<&str> {
            parts
                .get(i)
                .copied()
                .with_context(|| format!("generator spec '{s}' is missing {what}"))
        };
        match parts[0] {
            "regular" if parts.len() == 4 => Ok(GraphSpec::Regular {
                n: field(1, "N")?.parse().context("regular: bad N")?,
                d: field(2, "D")?.parse().context("regular: bad D")?,
                seed: field(3, "SEED")?.parse().context("regular: bad SEED")?,
            }),
            "er" if parts.len() == 4 => Ok(GraphSpec::ErdosRenyi {
                n: field(1, "N")?.parse().context("er: bad N")?,
                p: field(2, "P")?.parse().context("er: bad P")?,
                seed: field(3, "SEED")?.parse().context("er: bad SEED")?,
            }),
            "regular" | "er" => bail!("generator spec '{s}' needs the form {}:N:_:SEED", parts[0]),
            _ => Ok(GraphSpec::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::File(p) => write!(f, "{}", p.display()),
            GraphSpec::Regular { n, d, seed } => write!(f, "regular:{n}:{d}:{seed}"),
            GraphSpec::ErdosRenyi { n, p, seed } => write!(f, "er:{n}:{p}:{seed}"),
        }
    }
}

impl GraphSpec {
    /// Short label used in result rows: the file stem or the spec itself.
    pub fn label(&self) -> String {
        match self {
            GraphSpec::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            other => other.to_string(),
        }
    }

    pub fn build(&self) -> Result<WeightedGraph> {
        match *self {
            GraphSpec::File(ref p) => read_graph(p),
            GraphSpec::Regular { n, d, seed } => random_regular(n, d, seed),
            GraphSpec::ErdosRenyi { n, p, seed } => erdos_renyi(n, p, seed),
        }
    }

    pub fn laplacian(&self) -> Result<Laplacian> {
        Ok(self.build()?.laplacian())
    }
}

/// Reads a graph file. Isolated vertices are kept, so vertex ids match the
/// file.
pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let loaded = load_graph(path, GraphFormat::from_path(path))
        .with_context(|| format!("reading graph {}", path.display()))?;
    if loaded.skipped_diagonal > 0 {
        log::warn!(
            "{}: ignored {} diagonal entries",
            path.display(),
            loaded.skipped_diagonal
        );
    }
    Ok(loaded.graph)
}

/// Uniform random `d`-regular simple graph from the pairing model: stubs are
/// paired at random, a pair that would form a loop or a repeated edge is
/// redrawn, and the whole attempt restarts when no valid pair turns up.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<WeightedGraph> {
    if d >= n || (n * d) % 2 == 1 {
        bail!("no simple {d}-regular graph on {n} vertices");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..PAIR_REDRAWS {
                let a = rng.gen_range(0..stubs.len());
                let b = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[a].min(stubs[b]), stubs[a].max(stubs[b]));
                if a == b || u == v || !seen.insert((u, v)) {
                    continue;
                }
                edges.push((u, v, 1.0));
                stubs.swap_remove(a.max(b));
                stubs.swap_remove(a.min(b));
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }
        return Ok(WeightedGraph::new(n, edges)?);
    }
    bail!("pairing model failed for n={n}, d={d} after {PAIRING_ATTEMPTS} attempts")
}

/// Erdos-Renyi graph `G(n, p)` with unit weights.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        bail!("edge probability {p} outside [0, 1]");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    Ok(WeightedGraph::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse() {
        assert_eq!(
            "regular:100:4:7".parse::<GraphSpec>().unwrap(),
            GraphSpec::Regular {
                n: 100,
                d: 4,
                seed: 7
            }
        );
        assert_eq!(
            "er:10:0.5:1".parse::<GraphSpec>().unwrap(),
            GraphSpec::ErdosRenyi {
                n: 10,
                p: 0.5,
                seed: 1
            }
        );
        assert_eq!(
            "data/minnesota.mtx".parse::<GraphSpec>().unwrap(),
            GraphSpec::File("data/minnesota.mtx".into())
        );
        assert!("regular:10:3".parse::<GraphSpec>().is_err());
        assert!("er:10:x:1".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn regular_graphs_are_regular_and_seeded() {
        let g = random_regular(200, 10, 3).unwrap();
        assert_eq!(g.n_edges(), 1000);
        assert!(g.degrees().iter().all(|&d| d == 10.0));
        assert_eq!(g, random_regular(200, 10, 3).unwrap());
        assert_ne!(g, random_regular(200, 10, 4).unwrap());
        assert!(random_regular(5, 3, 0).is_err());
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(erdos_renyi(6, 0.0, 1).unwrap().n_edges(), 0);
        assert_eq!(erdos_renyi(6, 1.0, 1).unwrap().n_edges(), 15);
        assert!(erdos_renyi(6, 1.5, 1).is_err());
    }
}
