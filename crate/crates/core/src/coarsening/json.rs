//! Hierarchy persistence. Only level maps and variation costs are stored;
//! coarse Laplacians are recomputed from the base graph on load.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hierarchy::{Hierarchy, LevelMap};
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::graph::Laplacian;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct HierarchyFile {
    version: u32,
    graph_meta: GraphMeta,
    levels: Vec<LevelRecord>,
    eps_bound: Option<f64>,
    #[serde(default)]
    stalled: bool,
    #[serde(default)]
    target: Option<usize>,
    #[serde(default)]
    meta: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphMeta {
    n_vertices: usize,
    n_edges: usize,
    total_weight: f64,
}

/// Contraction levels store their sets in coarse-vertex order. Kron levels
/// store the single keep set and `consistent: false`.
#[derive(Debug, Serialize, Deserialize)]
struct LevelRecord {
    sets: Vec<Vec<usize>>,
    sigma: Option<f64>,
    method: String,
    consistent: bool,
}

fn total_weight(l: &Laplacian) -> f64 {
    l.edges().map(|(_, _, w)| w).sum()
}

pub fn hierarchy_to_json(h: &Hierarchy) -> Result<String> {
    let file = HierarchyFile {
        version: SCHEMA_VERSION,
        graph_meta: GraphMeta {
            n_vertices: h.n_fine(),
            n_edges: h.base().n_edges(),
            total_weight: total_weight(h.base()),
        },
        levels: h
            .levels()
            .iter()
            .map(|level| match &level.map {
                LevelMap::Contraction(p) => LevelRecord {
                    sets: p.sets().to_vec(),
                    sigma: level.sigma,
                    method: level.method.clone(),
                    consistent: true,
                },
                LevelMap::Kron(k) => LevelRecord {
                    sets: vec![k.keep().to_vec()],
                    sigma: level.sigma,
                    method: level.method.clone(),
                    consistent: false,
                },
            })
            .collect(),
        eps_bound: h.eps_bound(),
        stalled: h.stalled(),
        target: h.target(),
        meta: h.meta().clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Rebuilds a hierarchy over `base`, validating the schema version, the
/// graph fingerprint, every partition, and the stored error bound.
pub fn hierarchy_from_json(text: &str, base: &Laplacian) -> Result<Hierarchy> {
    let file: HierarchyFile = serde_json::from_str(text)?;
    if file.version != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            found: file.version,
            expected: SCHEMA_VERSION,
        });
    }
    let meta = &file.graph_meta;
    if meta.n_vertices != base.dim() || meta.n_edges != base.n_edges() {
        return Err(Error::GraphMismatch(format!(
            "file describes {} vertices / {} edges, graph has {} / {}",
            meta.n_vertices,
            meta.n_edges,
            base.dim(),
            base.n_edges()
        )));
    }
    let w = total_weight(base);
    if (meta.total_weight - w).abs() > 1e-9 * w.abs().max(1.0) {
        return Err(Error::GraphMismatch(format!(
            "total edge weight {} differs from the graph's {w}",
            meta.total_weight
        )));
    }
    let mut h = Hierarchy::new(base.clone());
    for (idx, rec) in file.levels.into_iter().enumerate() {
        if let Some(s) = rec.sigma {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::CorruptHierarchy(format!(
                    "level {idx}: invalid sigma {s}"
                )));
            }
        }
        if rec.consistent {
            let p = Partition::new(h.n_coarse(), rec.sets)?;
            h.push_level(p, rec.sigma, rec.method)?;
        } else {
            let [keep]: [Vec<usize>; 1] = rec.sets.try_into().map_err(|_| {
                Error::CorruptHierarchy(format!("level {idx}: Kron level must store one keep set"))
            })?;
            h.push_kron_level(&keep, rec.method)?;
        }
    }
    match (file.eps_bound, h.eps_bound()) {
        (None, None) => {}
        (Some(stored), Some(derived)) if (stored - derived).abs() <= 1e-12 * derived.max(1.0) => {}
        (stored, derived) => {
            return Err(Error::CorruptHierarchy(format!(
                "stored eps_bound {stored:?} does not match the level costs ({derived:?})"
            )))
        }
    }
    h.set_stalled(file.stalled);
    h.set_target(file.target);
    for (k, v) in file.meta {
        h.set_meta(k, v);
    }
    Ok(h)
}

pub fn save_hierarchy(h: &Hierarchy, path: &Path) -> Result<()> {
    fs::write(path, hierarchy_to_json(h)?)?;
    Ok(())
}

pub fn load_hierarchy(path: &Path, base: &Laplacian) -> Result<Hierarchy> {
    hierarchy_from_json(&fs::read_to_string(path)?, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn round_trip_and_tamper() {
        let l = WeightedGraph::cycle(6).laplacian();
        let mut h = Hierarchy::new(l.clone());
        h.push_level(
            Partition::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap(),
            Some(0.3),
            "local-var-edge",
        )
        .unwrap();
        h.set_target(Some(3));
        let text = hierarchy_to_json(&h).unwrap();
        let back = hierarchy_from_json(&text, &l).unwrap();
        assert_eq!(back, h);

        let overlapping = text.replacen(
            "\n          0,\n          1\n",
            "\n          0,\n          2\n",
            1,
        );
        assert_ne!(overlapping, text);
        assert!(matches!(
            hierarchy_from_json(&overlapping, &l),
            Err(Error::InvalidPartition(_))
        ));

        let versioned = text.replacen("\"version\": 1", "\"version\": 7", 1);
        assert!(matches!(
            hierarchy_from_json(&versioned, &l),
            Err(Error::SchemaVersion { found: 7, .. })
        ));

        let other = WeightedGraph::path(6).laplacian();
        assert!(matches!(
            hierarchy_from_json(&text, &other),
            Err(Error::GraphMismatch(_))
        ));
    }

    #[test]
    fn empty_hierarchy_round_trips() {
        let l = WeightedGraph::path(4).laplacian();
        let h = Hierarchy::new(l.clone());
        let back = hierarchy_from_json(&hierarchy_to_json(&h).unwrap(), &l).unwrap();
        assert_eq!(back.n_levels(), 0);
        assert_eq!(back.eps_bound(), Some(0.0));
    }

    #[test]
    fn kron_round_trip() {
        let l = WeightedGraph::cycle(8).laplacian();
        let mut h = Hierarchy::new(l.clone());
        h.push_kron_level(&[0, 2, 4, 6], "kron").unwrap();
        let back = hierarchy_from_json(&hierarchy_to_json(&h).unwrap(), &l).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.eps_bound(), None);
    }
}
