//! Undirected simple graphs and the structural analyses used by the learners.

mod generators;
mod separation;

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generators::{
    gen_cycle, gen_erdos_renyi, gen_random_regular, gen_small_world, EnsembleKind, EnsembleSpec,
    RANDOM_REGULAR_MAX_ATTEMPTS,
};
pub use separation::{
    check_local_separation, local_separator, LocalSeparationReport, SeparatorResult,
};

/// An undirected simple graph on nodes `0..p`.
///
/// Adjacency lists are kept sorted, so edge enumeration is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(p: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); p],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops, out-of-range endpoints
    /// and repeated pairs (in either orientation) are rejected.
    pub fn from_edges<I>(p: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(p);
        for (u, v) in edges {
            if u >= p || v >= p {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for p = {p}"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {u}")));
            }
            if !g.insert_edge(u, v) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; returns false if it was already present.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos_v = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos_v, u);
                self.edge_count += 1;
                true
            }
        }
    }

    pub fn p(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn k(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.p() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Breadth-first distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.p()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// True if a path joins `a` and `b` avoiding every node in `removed`.
    pub fn connected_avoiding(&self, a: usize, b: usize, removed: &[bool]) -> bool {
        if removed[a] || removed[b] {
            return false;
        }
        let mut seen = vec![false; self.p()];
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(u) = stack.pop() {
            if u == b {
                return true;
            }
            for &v in &self.adj[u] {
                if !seen[v] && !removed[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    pub fn to_file_format(&self) -> GraphFile {
        GraphFile {
            p: self.p(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file_format()).expect("graph serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("graph JSON: {e}")))?;
        file.into_graph()
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// On-disk graph representation: `{"p": int, "edges": [[i, j], ...]}` with
/// `i < j`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub p: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        Graph::from_edges(self.p, self.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

/// Length of the shortest cycle, or `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let p = g.p();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; p];
    let mut parent = vec![usize::MAX; p];
    let mut queue = VecDeque::new();
    for root in 0..p {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // no shorter cycle can be closed from this depth
                if 2 * dist[u] >= b {
                    break;
                }
            }
            for &v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// The local subgraph around `i`: every node is kept, but only edges with
/// both endpoints within distance `gamma` of `i` survive.
pub fn local_subgraph(g: &Graph, i: usize, gamma: usize) -> Result<Graph> {
    if i >= g.p() {
        return Err(Error::InvalidParameter(format!(
            "node {i} out of range for p = {}",
            g.p()
        )));
    }
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be at least 1".into()));
    }
    let dist = g.bfs_distances(i);
    let in_ball = |v: usize| dist[v].is_some_and(|d| d <= gamma);
    let mut f = Graph::empty(g.p());
    for (u, v) in g.edges() {
        if in_ball(u) && in_ball(v) {
            f.insert_edge(u, v);
        }
    }
    Ok(f)
}

/// Raw and normalised edge disagreement between a reference graph and an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditDistance {
    /// Size of the symmetric difference of the two edge sets.
    pub raw: usize,
    /// `raw / max(1, |E_true|)`.
    pub normalized: f64,
}

pub fn edit_distance(truth: &Graph, estimate: &Graph) -> Result<EditDistance> {
    if truth.p() != estimate.p() {
        return Err(Error::InvalidArgument(format!(
            "graphs have different node counts ({} vs {})",
            truth.p(),
            estimate.p()
        )));
    }
    let missed = truth.edges().filter(|&(u, v)| !estimate.has_edge(u, v)).count();
    let spurious = estimate.edges().filter(|&(u, v)| !truth.has_edge(u, v)).count();
    let raw = missed + spurious;
    Ok(EditDistance {
        raw,
        normalized: raw as f64 / truth.k().max(1) as f64,
    })
}
