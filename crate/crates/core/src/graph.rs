//! Simple undirected graphs on dense vertex indices and the structural
//! primitives the rest of the crate builds on.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..vertex_count`.
///
/// Neighbor lists are kept sorted for iteration; a pair set answers
/// adjacency queries in constant time. Values are immutable once built.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    pairs: HashSet<(usize, usize)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj.len() == other.adj.len() && self.edges == other.edges
    }
}

impl Eq for Graph {}

#[inline]
fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and endpoints
    /// outside `0..vertex_count`. Edge orientation is irrelevant.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut pairs = HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            let e = ordered(u, v);
            if !pairs.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            list.push(e);
        }
        list.sort_unstable();
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: list,
            pairs,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); vertex_count],
            edges: Vec::new(),
            pairs: HashSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Graph::new(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
    }

    /// The 3-dimensional hypercube `Q_3`.
    pub fn cube() -> Self {
        let edges = (0..8usize).flat_map(|u| {
            (0..3)
                .map(move |b| (u, u ^ (1 << b)))
                .filter(|(a, b)| a < b)
        });
        Graph::new(8, edges).expect("cube is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&ordered(u, v))
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    /// The sets are expected to be disjoint.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter()
            .map(|u| self.adj[u].iter().filter(|&&w| b.contains(w)).count())
            .sum()
    }

    /// Supergraph on the same vertices with `extra` edges added; edges
    /// already present are ignored.
    pub fn with_extra_edges(
        &self,
        extra: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut all: Vec<(usize, usize)> = self.edges.clone();
        for (u, v) in extra {
            let e = ordered(u, v);
            if !self.pairs.contains(&e) {
                all.push(e);
            }
        }
        all.sort_unstable();
        all.dedup();
        Graph::new(self.vertex_count(), all)
    }

    /// Returns `(d, ordering)` where `d` is the degeneracy.
    ///
    /// A vertex of minimum current degree is deleted repeatedly, lowest index
    /// first among ties; the ordering is the reversed deletion sequence, so
    /// every vertex has at most `d` neighbors before it.
    pub fn degeneracy(&self) -> (usize, VertexOrdering) {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
        let mut removed = vec![false; n];
        let mut deletion = Vec::with_capacity(n);
        let mut d = 0;
        while let Some((dv, v)) = queue.pop_first() {
            d = d.max(dv);
            removed[v] = true;
            deletion.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    queue.remove(&(deg[w], w));
                    deg[w] -= 1;
                    queue.insert((deg[w], w));
                }
            }
        }
        deletion.reverse();
        let ordering = VertexOrdering {
            order: deletion,
            back_degree_bound: d,
        };
        (d, ordering)
    }

    /// The unique maximal vertex set inducing minimum degree at least `k`.
    pub fn k_core(&self, k: usize) -> VertexSet {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] < k).collect();
        for &v in &stack {
            removed[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] < k {
                        removed[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        VertexSet((0..n).filter(|&v| !removed[v]).collect())
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        let members = s.as_slice();
        members.iter().all(|&u| {
            self.adj[u]
                .iter()
                .all(|&w| w <= u || members.binary_search(&w).is_err())
        })
    }

    /// Lexicographically first triangle `(a, b, c)` with `a < b < c`, if any.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        for &(u, v) in &self.edges {
            let (nu, nv) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            return Some((u, v, nu[i]));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        None
    }

    /// `G[s]` reindexed to `0..|s|`, with the map from new to old indices.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, v) in s.iter().enumerate() {
            index[v] = i;
        }
        let edges = s.iter().flat_map(|u| {
            let index = &index;
            self.adj[u]
                .iter()
                .filter(move |&&w| w > u && index[w] != usize::MAX)
                .map(move |&w| (index[u], index[w]))
        });
        let g = Graph::new(s.len(), edges).expect("induced subgraph of a simple graph is simple");
        (g, s.as_slice().to_vec())
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|u| {
                self.adj[u]
                    .iter()
                    .filter(|&&w| w > u && s.contains(w))
                    .count()
            })
            .sum()
    }

    pub fn to_file(&self, layers: Option<Vec<usize>>) -> GraphFile {
        GraphFile {
            n: self.vertex_count(),
            layers,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

/// Strictly increasing list of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Checked constructor for an already sorted, duplicate-free list.
    pub fn from_sorted(v: Vec<usize>) -> Result<Self> {
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidVertexSet(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(VertexSet(v))
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.0.last().map_or(true, |&v| v < g.vertex_count())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

/// A permutation of the vertices together with a bound on how many
/// neighbors each vertex has among its predecessors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrdering {
    pub order: Vec<usize>,
    pub back_degree_bound: usize,
}

impl VertexOrdering {
    /// `position[v]` is the index of `v` in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn is_permutation_of(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        self.order
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    /// Neighbors of `v` that appear before it in the ordering.
    pub fn back_neighbors(&self, g: &Graph, positions: &[usize], v: usize) -> Vec<usize> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&w| positions[w] < positions[v])
            .collect()
    }

    /// Re-checks the permutation property and the back-degree bound.
    pub fn validate(&self, g: &Graph) -> bool {
        if !self.is_permutation_of(g) {
            return false;
        }
        let pos = self.positions();
        (0..g.vertex_count()).all(|v| {
            g.neighbors(v).iter().filter(|&&w| pos[w] < pos[v]).count() <= self.back_degree_bound
        })
    }
}

/// On-disk graph document: `{"n": .., "layers": [..] | null, "edges": [[u, v], ..]}`.
///
/// Edges are written with `u < v` in lexicographic order; parsing rejects
/// anything else so that reading and writing are exact inverses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub layers: Option<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<()> {
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Format(format!(
                    "edges must be sorted and distinct, found {:?} before {:?}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(e) = self.edges.iter().find(|e| e[0] >= e[1]) {
            return Err(Error::Format(format!(
                "edge {e:?} is not written as [u, v] with u < v"
            )));
        }
        if let Some(layers) = &self.layers {
            if layers.iter().sum::<usize>() != self.n {
                return Err(Error::Format(format!(
                    "layer sizes sum to {}, expected n = {}",
                    layers.iter().sum::<usize>(),
                    self.n
                )));
            }
            if layers.iter().any(|&s| s == 0) {
                return Err(Error::Format("layer sizes must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> Result<Graph> {
        self.check()?;
        Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }
}
