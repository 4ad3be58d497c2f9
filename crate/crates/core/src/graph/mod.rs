//! Undirected weighted graphs, their Laplacians and incidence factorizations.

mod incidence;
pub mod io;
mod laplacian;

pub use incidence::IncidenceMatrix;
pub use laplacian::Laplacian;

use crate::error::{Error, Result};

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected graph with strictly positive edge weights, no self-loops and
/// at most one edge per unordered vertex pair.
///
/// Edges are kept sorted by `(u, v)` with `u < v`, so two graphs built from
/// the same edge set compare equal regardless of input order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a vertex outside [0, {n_vertices})"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, weight: w });
        }
        list.sort_by_key(|x| (x.u, x.v));
        if let Some(pair) = list
            .windows(2)
            .find(|p| p[0].u == p[1].u && p[0].v == p[1].v)
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Self {
            n_vertices,
            edges: list,
        })
    }

    /// Path graph `0 - 1 - ... - (n-1)` with unit weights.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i, 1.0))).expect("valid path")
    }

    /// Cycle graph on `n >= 3` vertices with unit weights.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).expect("valid cycle")
    }

    /// Complete graph with unit weights.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0)));
        Self::new(n, edges).expect("valid complete graph")
    }

    /// Star with vertex 0 at the center and `leaves` unit-weight spokes.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1.0))).expect("valid star")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n_vertices];
        for e in &self.edges {
            deg[e.u] += e.weight;
            deg[e.v] += e.weight;
        }
        deg
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Vertices without incident edges.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let mut touched = vec![false; self.n_vertices];
        for e in &self.edges {
            touched[e.u] = true;
            touched[e.v] = true;
        }
        (0..self.n_vertices).filter(|&i| !touched[i]).collect()
    }

    /// Maximal connected vertex sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        components(self.n_vertices, self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices <= 1 || self.connected_components().len() == 1
    }

    pub fn laplacian(&self) -> Laplacian {
        Laplacian::from_graph(self)
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        IncidenceMatrix::from_graph(self)
    }
}

pub(crate) fn components<I>(n: usize, edges: I) -> Vec<Vec<usize>>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut dsu = DisjointSets::new(n);
    for (u, v) in edges {
        dsu.union(u, v);
    }
    let mut label = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = dsu.find(i);
        if label[root] == usize::MAX {
            label[root] = out.len();
            out.push(Vec::new());
        }
        out[label[root]].push(i);
    }
    out
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}
