//! Simple undirected graphs on at most 64 vertices, stored as adjacency bitsets.
//!
//! Vertices are labeled `0..n`. Every constructor validates symmetry and
//! loop-freeness, and graphs are immutable afterwards.

mod edge_list;
mod generate;
mod vertex_set;

pub use edge_list::{read_edge_list, write_edge_list};
pub use generate::{generate, GraphFamily, GraphFamilySpec, RANDOM_REGULAR_MAX_RESTARTS};
pub use vertex_set::{Iter as VertexSetIter, VertexSet};

use crate::error::{Error, Result};

/// Largest vertex count representable by the bitset rows.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates, and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameters(format!(
                "n = {n} exceeds the supported maximum of {MAX_VERTICES} vertices"
            )));
        }
        let mut adj = vec![VertexSet::EMPTY; n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adj[u].contains(v) {
                return Err(Error::DuplicateEdge { u: u.min(v), v: u.max(v) });
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph::from_rows_unchecked(adj))
    }

    /// Builds a graph from adjacency rows, checking symmetry and loop-freeness.
    pub fn from_adjacency(rows: Vec<VertexSet>) -> Result<Graph> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(Error::InvalidParameters(format!(
                "n = {n} exceeds the supported maximum of {MAX_VERTICES} vertices"
            )));
        }
        for (u, row) in rows.iter().enumerate() {
            if !row.is_subset(VertexSet::full(n)) {
                let vertex = (*row - VertexSet::full(n)).first().unwrap_or(n);
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if row.contains(u) {
                return Err(Error::SelfLoop(u));
            }
            for v in row.iter() {
                if !rows[v].contains(u) {
                    return Err(Error::InvalidParameters(format!(
                        "adjacency is not symmetric at ({u}, {v})"
                    )));
                }
            }
        }
        Ok(Graph::from_rows_unchecked(rows))
    }

    fn from_rows_unchecked(adj: Vec<VertexSet>) -> Graph {
        let degrees = adj.iter().map(|r| r.len()).collect();
        Graph { n: adj.len(), adj, degrees }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// The common degree if the graph is regular. The empty graph on zero
    /// vertices counts as 0-regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.degrees.first().copied().unwrap_or(0);
        self.degrees.iter().all(|&d| d == first).then_some(first)
    }

    /// Like [`Graph::regular_degree`] but reports the degree spread on failure.
    pub fn require_regular(&self) -> Result<usize> {
        self.regular_degree().ok_or_else(|| Error::NotRegular {
            min: self.degrees.iter().copied().min().unwrap_or(0),
            max: self.max_degree(),
        })
    }

    /// Checks that every member of `set` is a vertex of this graph.
    pub fn check_set(&self, set: VertexSet) -> Result<()> {
        match (set - self.vertices()).first() {
            Some(vertex) => Err(Error::VertexOutOfRange { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    /// The subgraph induced on `keep`, relabeled to `0..keep.len()` in
    /// increasing order of the original labels. Returns the original labels too.
    pub fn induced(&self, keep: VertexSet) -> (Graph, Vec<usize>) {
        let labels = (keep & self.vertices()).to_vec();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in labels.iter().enumerate() {
            index[v] = i;
        }
        let rows = labels
            .iter()
            .map(|&v| (self.adj[v] & keep).iter().map(|w| index[w]).collect())
            .collect();
        (Graph::from_rows_unchecked(rows), labels)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n || perm.iter().copied().collect::<VertexSet>() != self.vertices() {
            return Err(Error::InvalidParameters("relabeling is not a permutation".into()));
        }
        Graph::from_edges(self.n, self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Whether every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = VertexSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next | self.adj[v];
            }
            frontier = next - seen;
            seen = seen | next;
        }
        seen == self.vertices()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}
