//! Graph file formats: Matrix Market coordinate files and plain edge lists.
//!
//! Edge lists hold one `src dst [weight]` triple per line (whitespace
//! separated, weight defaults to 1.0, `#` starts a comment). Vertex ids may
//! be sparse; they are remapped to dense indices in increasing id order and
//! the original ids are kept in [`LoadedGraph::id_map`].
//!
//! Matrix Market files must be square `coordinate` matrices with `real`,
//! `integer` or `pattern` values in `symmetric` or `general` storage.
//! Diagonal entries are skipped. In `general` storage duplicate entries are
//! summed and both orientations of every edge must carry equal weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::WeightedGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

impl GraphFormat {
    /// `.mtx` files are Matrix Market, everything else an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => Self::MatrixMarket,
            _ => Self::EdgeList,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    /// Original vertex id of each dense index (edge lists only).
    pub id_map: Option<Vec<u64>>,
    /// Vertices without incident edges.
    pub isolated: Vec<usize>,
    /// Diagonal Matrix Market entries that were skipped.
    pub skipped_diagonal: usize,
}

pub fn load_graph(path: &Path, format: GraphFormat) -> Result<LoadedGraph> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text, format, path)
}

pub fn parse_graph(text: &str, format: GraphFormat, origin: &Path) -> Result<LoadedGraph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text, origin),
        GraphFormat::MatrixMarket => parse_matrix_market(text, origin),
    }
}

pub fn save_graph(g: &WeightedGraph, path: &Path, format: GraphFormat) -> Result<()> {
    fs::write(path, format_graph(g, format))?;
    Ok(())
}

/// Serializes with shortest round-trip float formatting, so loading the
/// output reproduces every weight bit for bit.
pub fn format_graph(g: &WeightedGraph, format: GraphFormat) -> String {
    let mut out = String::new();
    match format {
        GraphFormat::EdgeList => {
            for e in g.edges() {
                let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
            }
        }
        GraphFormat::MatrixMarket => {
            out.push_str("%%MatrixMarket matrix coordinate real symmetric\n");
            let n = g.n_vertices();
            let _ = writeln!(out, "{n} {n} {}", g.n_edges());
            for e in g.edges() {
                let _ = writeln!(out, "{} {} {}", e.v + 1, e.u + 1, e.weight);
            }
        }
    }
    out
}

fn parse_error(origin: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn check_weight(origin: &Path, line: usize, w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight {
            path: origin.to_path_buf(),
            line,
            weight: w,
        })
    }
}

fn parse_edge_list(text: &str, origin: &Path) -> Result<LoadedGraph> {
    // ordered pair -> (weight, line)
    let mut entries: BTreeMap<(u64, u64), (f64, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_error(
                origin,
                line_no,
                format!("expected `src dst [weight]`, found {} fields", fields.len()),
            ));
        }
        let parse_id = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_error(origin, line_no, format!("invalid vertex id `{s}`")))
        };
        let a = parse_id(fields[0])?;
        let b = parse_id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| parse_error(origin, line_no, format!("invalid weight `{s}`")))?,
            None => 1.0,
        };
        check_weight(origin, line_no, w)?;
        if a == b {
            return Err(parse_error(
                origin,
                line_no,
                format!("self-loop at vertex {a}"),
            ));
        }
        if let Some(&(_, first)) = entries.get(&(a, b)) {
            return Err(parse_error(
                origin,
                line_no,
                format!("duplicate edge ({a}, {b}), first given on line {first}"),
            ));
        }
        entries.insert((a, b), (w, line_no));
    }

    let mut ids: Vec<u64> = entries.keys().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

    let mut edges = Vec::new();
    for (&(a, b), &(w, _)) in &entries {
        if let Some(&(w_rev, _)) = entries.get(&(b, a)) {
            if w_rev != w {
                return Err(Error::AsymmetricWeight {
                    path: origin.to_path_buf(),
                    i: index[&a],
                    j: index[&b],
                    w_ij: w,
                    w_ji: w_rev,
                });
            }
            if a > b {
                continue;
            }
        }
        edges.push((index[&a], index[&b], w));
    }
    let graph = WeightedGraph::new(ids.len(), edges)?;
    Ok(LoadedGraph {
        isolated: graph.isolated_vertices(),
        graph,
        id_map: Some(ids),
        skipped_diagonal: 0,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_matrix_market(text: &str, origin: &Path) -> Result<LoadedGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(origin, 1, "empty file"))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_error(
            origin,
            1,
            "missing `%%MatrixMarket matrix` header",
        ));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_error(
            origin,
            1,
            format!("unsupported layout `{}`", tokens[2]),
        ));
    }
    let field = match tokens[3].as_str() {
        "real" | "integer" => Field::Real,
        "pattern" => Field::Pattern,
        other => {
            return Err(parse_error(
                origin,
                1,
                format!("unsupported field `{other}`"),
            ))
        }
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err(parse_error(
                origin,
                1,
                format!("unsupported symmetry `{other}`"),
            ))
        }
    };

    let mut size: Option<(usize, usize)> = None;
    let mut seen = 0usize;
    let mut skipped_diagonal = 0usize;
    let mut last_line = 1usize;
    // Symmetric storage: unordered pair -> (weight, line).
    let mut undirected: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    // General storage: ordered pair -> summed weight.
    let mut directed: BTreeMap<(usize, usize), f64> = BTreeMap::new();

    for (idx, raw) in lines {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let Some((n, expected)) = size else {
            if fields.len() != 3 {
                return Err(parse_error(origin, line_no, "expected `rows cols entries`"));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_error(origin, line_no, format!("invalid size `{s}`")))
            };
            let (rows, cols, nnz) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
            if rows != cols {
                return Err(parse_error(
                    origin,
                    line_no,
                    format!("matrix is {rows}x{cols}, expected square"),
                ));
            }
            size = Some((rows, nnz));
            continue;
        };
        let want = if field == Field::Pattern { 2 } else { 3 };
        if fields.len() != want {
            return Err(parse_error(
                origin,
                line_no,
                format!("expected {want} fields, found {}", fields.len()),
            ));
        }
        seen += 1;
        if seen > expected {
            return Err(parse_error(
                origin,
                line_no,
                format!("more than {expected} entries"),
            ));
        }
        let parse_idx = |s: &str| -> Result<usize> {
            let v = s
                .parse::<usize>()
                .map_err(|_| parse_error(origin, line_no, format!("invalid index `{s}`")))?;
            if v == 0 || v > n {
                return Err(parse_error(
                    origin,
                    line_no,
                    format!("index {v} outside [1, {n}]"),
                ));
            }
            Ok(v - 1)
        };
        let i = parse_idx(fields[0])?;
        let j = parse_idx(fields[1])?;
        let w = if field == Field::Pattern {
            1.0
        } else {
            fields[2].parse::<f64>().map_err(|_| {
                parse_error(origin, line_no, format!("invalid value `{}`", fields[2]))
            })?
        };
        if i == j {
            skipped_diagonal += 1;
            continue;
        }
        check_weight(origin, line_no, w)?;
        match symmetry {
            Symmetry::Symmetric => {
                let key = (i.min(j), i.max(j));
                if let Some(&(_, first)) = undirected.get(&key) {
                    return Err(parse_error(
                        origin,
                        line_no,
                        format!(
                            "edge ({}, {}) already given on line {first}",
                            key.0 + 1,
                            key.1 + 1
                        ),
                    ));
                }
                undirected.insert(key, (w, line_no));
            }
            Symmetry::General => *directed.entry((i, j)).or_insert(0.0) += w,
        }
    }

    let Some((n, expected)) = size else {
        return Err(parse_error(origin, last_line, "missing size line"));
    };
    if seen != expected {
        return Err(parse_error(
            origin,
            last_line,
            format!("expected {expected} entries, found {seen}"),
        ));
    }

    let edges: Vec<(usize, usize, f64)> = match symmetry {
        Symmetry::Symmetric => undirected
            .into_iter()
            .map(|((i, j), (w, _))| (i, j, w))
            .collect(),
        Symmetry::General => {
            let mut edges = Vec::new();
            for (&(i, j), &w) in &directed {
                let w_rev = directed.get(&(j, i)).copied().unwrap_or(0.0);
                if w_rev != w {
                    return Err(Error::AsymmetricWeight {
                        path: PathBuf::from(origin),
                        i,
                        j,
                        w_ij: w,
                        w_ji: w_rev,
                    });
                }
                if i < j {
                    edges.push((i, j, w));
                }
            }
            edges
        }
    };
    let graph = WeightedGraph::new(n, edges)?;
    Ok(LoadedGraph {
        isolated: graph.isolated_vertices(),
        graph,
        id_map: None,
        skipped_diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> PathBuf {
        PathBuf::from("test")
    }

    #[test]
    fn edge_list_path3() {
        let g = parse_graph("0 1 1.0\n1 2 1.0", GraphFormat::EdgeList, &origin()).unwrap();
        assert_eq!(g.graph, WeightedGraph::path(3));
        assert!(g.isolated.is_empty());
    }

    #[test]
    fn edge_list_defaults_comments_and_remap() {
        let text = "# header\n10 20\n20 30 2.5 # trailing\n\n30 20 2.5\n";
        let g = parse_graph(text, GraphFormat::EdgeList, &origin()).unwrap();
        assert_eq!(g.id_map.as_deref(), Some(&[10, 20, 30][..]));
        assert_eq!(
            g.graph,
            WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.5)]).unwrap()
        );
    }

    #[test]
    fn edge_list_errors() {
        let err = parse_graph("0 1 -2.0", GraphFormat::EdgeList, &origin()).unwrap_err();
        assert!(
            matches!(err, Error::NonPositiveWeight { line: 1, .. }),
            "{err}"
        );
        let err = parse_graph("0 1 1\n0 1 1", GraphFormat::EdgeList, &origin()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_graph("0 1 1\n1 0 2", GraphFormat::EdgeList, &origin()).unwrap_err();
        assert!(matches!(err, Error::AsymmetricWeight { .. }), "{err}");
        let err = parse_graph("0 1\n1 x", GraphFormat::EdgeList, &origin()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_graph("3 3 1", GraphFormat::EdgeList, &origin()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn matrix_market_symmetric_path3() {
        let text =
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 2\n2 1 1.0\n3 2 1.0\n";
        let g = parse_graph(text, GraphFormat::MatrixMarket, &origin()).unwrap();
        assert_eq!(g.graph, WeightedGraph::path(3));
        assert!(g.id_map.is_none());
    }

    #[test]
    fn matrix_market_general_sums_duplicates() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 5\n1 2 0.5\n1 2 0.5\n2 1 1\n2 3 2\n3 2 2\n";
        let g = parse_graph(text, GraphFormat::MatrixMarket, &origin()).unwrap();
        assert_eq!(
            g.graph,
            WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
        );
        let bad = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n";
        assert!(matches!(
            parse_graph(bad, GraphFormat::MatrixMarket, &origin()),
            Err(Error::AsymmetricWeight { .. })
        ));
    }

    #[test]
    fn matrix_market_pattern_diagonal_and_isolated() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n1 1\n2 1\n3 2\n";
        let g = parse_graph(text, GraphFormat::MatrixMarket, &origin()).unwrap();
        assert_eq!(g.skipped_diagonal, 1);
        assert_eq!(g.isolated, vec![3]);
        assert_eq!(g.graph.n_edges(), 2);
    }

    #[test]
    fn matrix_market_errors() {
        let neg = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 -1\n";
        assert!(matches!(
            parse_graph(neg, GraphFormat::MatrixMarket, &origin()),
            Err(Error::NonPositiveWeight { line: 3, .. })
        ));
        let short = "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 1\n";
        assert!(parse_graph(short, GraphFormat::MatrixMarket, &origin()).is_err());
        let array = "%%MatrixMarket matrix array real general\n2 2\n";
        assert!(parse_graph(array, GraphFormat::MatrixMarket, &origin()).is_err());
    }

    #[test]
    fn format_round_trips() {
        let g = WeightedGraph::new(
            4,
            [
                (0, 1, 0.1),
                (1, 2, 1.0 / 3.0),
                (2, 3, 7.25e-9),
                (0, 3, 12345.678),
            ],
        )
        .unwrap();
        for format in [GraphFormat::EdgeList, GraphFormat::MatrixMarket] {
            let text = format_graph(&g, format);
            let back = parse_graph(&text, format, &origin()).unwrap();
            assert_eq!(back.graph, g);
        }
    }
}
