//! Exact search for k-regular subgraphs.
//!
//! The graph is first reduced to its k-core and split into connected
//! components. Inside a component, candidate anchor vertices are tried in
//! descending degree order; for each anchor a depth-first search assigns
//! edges to the incomplete vertices of the partial subgraph, with constraint
//! propagation on both vertex and edge status. Anchors that fail are
//! excluded for the rest of the component, and the exclusion cascades.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A subgraph in which every vertex has exactly `k` of the listed edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularWitness {
    pub k: usize,
    pub vertices: VertexSet,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Found(RegularWitness),
    NotFound,
    BudgetExceeded,
}

impl Detection {
    pub fn label(&self) -> &'static str {
        match self {
            Detection::Found(_) => "found",
            Detection::NotFound => "not_found",
            Detection::BudgetExceeded => "budget_exceeded",
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Detection::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionReport {
    pub outcome: Detection,
    pub nodes_expanded: u64,
}

/// JSON form: `{"outcome": .., "witness": {..} | null, "nodes_expanded": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionJson {
    pub outcome: String,
    pub witness: Option<RegularWitness>,
    pub nodes_expanded: u64,
}

impl DetectionReport {
    pub fn to_json(&self) -> DetectionJson {
        DetectionJson {
            outcome: self.outcome.label().to_string(),
            witness: match &self.outcome {
                Detection::Found(w) => Some(w.clone()),
                _ => None,
            },
            nodes_expanded: self.nodes_expanded,
        }
    }
}

/// True iff `w` is a nonempty k-regular subgraph of `g`.
pub fn verify_witness(g: &Graph, w: &RegularWitness) -> bool {
    if w.vertices.is_empty() || !w.vertices.is_valid_for(g) {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    let mut deg = std::collections::HashMap::new();
    for e in &w.edges {
        let (u, v) = (e[0].min(e[1]), e[0].max(e[1]));
        if u == v || !seen.insert((u, v)) {
            return false;
        }
        if v >= g.vertex_count() || !g.has_edge(u, v) {
            return false;
        }
        if !w.vertices.contains(u) || !w.vertices.contains(v) {
            return false;
        }
        *deg.entry(u).or_insert(0usize) += 1;
        *deg.entry(v).or_insert(0usize) += 1;
    }
    w.vertices
        .iter()
        .all(|v| deg.get(&v).copied().unwrap_or(0) == w.k)
}

/// Decides whether `g` has a k-regular subgraph. `NotFound` is exact;
/// `BudgetExceeded` means more than `budget` search nodes were needed.
pub fn find_k_regular(g: &Graph, k: usize, budget: u64) -> DetectionReport {
    assert!(k >= 1, "k must be at least 1");
    let core = g.k_core(k);
    let mut nodes = 0u64;
    if core.is_empty() {
        return DetectionReport {
            outcome: Detection::NotFound,
            nodes_expanded: 0,
        };
    }
    let (sub, map) = g.induced_subgraph(&core);
    let mut exceeded = false;
    for component in components(&sub) {
        let (cg, cmap) = sub.induced_subgraph(&component);
        let mut search = Search::new(&cg, k, budget);
        search.nodes = nodes;
        let outcome = search.run();
        nodes = search.nodes;
        match outcome {
            Outcome::Found => {
                let to_original = |v: usize| map[cmap[v]];
                let vertices: VertexSet = (0..cg.vertex_count())
                    .filter(|&v| search.vstate[v] == State::In)
                    .map(to_original)
                    .collect();
                let mut edges: Vec<[usize; 2]> = search
                    .edges
                    .iter()
                    .zip(&search.estate)
                    .filter(|(_, s)| **s == State::In)
                    .map(|(&(u, v), _)| {
                        let (a, b) = (to_original(u), to_original(v));
                        [a.min(b), a.max(b)]
                    })
                    .collect();
                edges.sort_unstable();
                return DetectionReport {
                    outcome: Detection::Found(RegularWitness { k, vertices, edges }),
                    nodes_expanded: nodes,
                };
            }
            Outcome::Exceeded => {
                exceeded = true;
                break;
            }
            Outcome::Exhausted => {}
        }
    }
    DetectionReport {
        outcome: if exceeded {
            Detection::BudgetExceeded
        } else {
            Detection::NotFound
        },
        nodes_expanded: nodes,
    }
}

fn components(g: &Graph) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(members.into_iter().collect());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Undecided,
    In,
    Out,
}

enum Outcome {
    Found,
    Exhausted,
    Exceeded,
}

struct Conflict;

enum Change {
    Vertex(usize),
    Edge(usize),
}

struct Search<'g> {
    g: &'g Graph,
    k: usize,
    budget: u64,
    nodes: u64,
    edges: Vec<(usize, usize)>,
    /// Incident edge ids per vertex.
    incident: Vec<Vec<usize>>,
    vstate: Vec<State>,
    estate: Vec<State>,
    in_count: Vec<usize>,
    avail: Vec<usize>,
    trail: Vec<Change>,
    queue: Vec<usize>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: usize, budget: u64) -> Self {
        let edges = g.edges().to_vec();
        let mut incident = vec![Vec::new(); g.vertex_count()];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(id);
            incident[v].push(id);
        }
        let avail = incident.iter().map(Vec::len).collect();
        Search {
            g,
            k,
            budget,
            nodes: 0,
            vstate: vec![State::Undecided; g.vertex_count()],
            estate: vec![State::Undecided; edges.len()],
            in_count: vec![0; g.vertex_count()],
            avail,
            edges,
            incident,
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn run(&mut self) -> Outcome {
        let mut anchors: Vec<usize> = (0..self.g.vertex_count()).collect();
        anchors.sort_by_key(|&v| (std::cmp::Reverse(self.g.degree(v)), v));
        for a in anchors {
            if self.vstate[a] != State::Undecided {
                continue;
            }
            let mark = self.trail.len();
            let tried = self.set_vertex(a, State::In).and_then(|_| self.propagate());
            if tried.is_ok() {
                match self.dfs() {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            } else {
                self.nodes += 1;
            }
            self.undo_to(mark);
            // Every k-regular subgraph through `a` has been ruled out.
            if self
                .set_vertex(a, State::Out)
                .and_then(|_| self.propagate())
                .is_err()
            {
                return Outcome::Exhausted;
            }
            if self.nodes > self.budget {
                return Outcome::Exceeded;
            }
        }
        Outcome::Exhausted
    }

    fn dfs(&mut self) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::Exceeded;
        }
        // Most constrained incomplete vertex of the partial subgraph.
        let pick = (0..self.g.vertex_count())
            .filter(|&v| self.vstate[v] == State::In && self.in_count[v] < self.k)
            .min_by_key(|&v| {
                (
                    self.avail[v] - self.in_count[v],
                    std::cmp::Reverse(self.g.degree(v)),
                    v,
                )
            });
        let Some(v) = pick else {
            return Outcome::Found;
        };
        let e = *self.incident[v]
            .iter()
            .find(|&&e| self.estate[e] == State::Undecided)
            .expect("propagation leaves an undecided edge at an incomplete vertex");
        for choice in [State::In, State::Out] {
            let mark = self.trail.len();
            if self
                .set_edge(e, choice)
                .and_then(|_| self.propagate())
                .is_ok()
            {
                match self.dfs() {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
            self.undo_to(mark);
        }
        Outcome::Exhausted
    }

    fn set_vertex(&mut self, v: usize, s: State) -> Result<(), Conflict> {
        match self.vstate[v] {
            State::Undecided => {
                self.vstate[v] = s;
                self.trail.push(Change::Vertex(v));
                self.queue.push(v);
                Ok(())
            }
            cur if cur == s => Ok(()),
            _ => Err(Conflict),
        }
    }

    fn set_edge(&mut self, e: usize, s: State) -> Result<(), Conflict> {
        match self.estate[e] {
            State::Undecided => {
                self.estate[e] = s;
                self.trail.push(Change::Edge(e));
                let (u, v) = self.edges[e];
                for w in [u, v] {
                    if s == State::In {
                        self.in_count[w] += 1;
                    } else {
                        self.avail[w] -= 1;
                    }
                    self.queue.push(w);
                }
                Ok(())
            }
            cur if cur == s => Ok(()),
            _ => Err(Conflict),
        }
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        let k = self.k;
        let result = (|| {
            while let Some(v) = self.queue.pop() {
                let (inn, avail) = (self.in_count[v], self.avail[v]);
                match self.vstate[v] {
                    State::Out => {
                        if inn > 0 {
                            return Err(Conflict);
                        }
                        self.set_undecided_edges(v, State::Out)?;
                    }
                    State::In => {
                        if inn > k || avail < k {
                            return Err(Conflict);
                        }
                        if inn == k && avail > k {
                            self.set_undecided_edges(v, State::Out)?;
                        } else if avail == k && inn < k {
                            self.set_undecided_edges(v, State::In)?;
                        }
                    }
                    State::Undecided => {
                        if inn > 0 {
                            self.set_vertex(v, State::In)?;
                        } else if avail < k {
                            self.set_vertex(v, State::Out)?;
                        }
                    }
                }
            }
            Ok(())
        })();
        if result.is_err() {
            self.queue.clear();
        }
        result
    }

    fn set_undecided_edges(&mut self, v: usize, s: State) -> Result<(), Conflict> {
        for i in 0..self.incident[v].len() {
            let e = self.incident[v][i];
            if self.estate[e] == State::Undecided {
                self.set_edge(e, s)?;
            }
        }
        Ok(())
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Change::Vertex(v) => self.vstate[v] = State::Undecided,
                Change::Edge(e) => {
                    let (u, v) = self.edges[e];
                    for w in [u, v] {
                        if self.estate[e] == State::In {
                            self.in_count[w] -= 1;
                        } else {
                            self.avail[w] += 1;
                        }
                    }
                    self.estate[e] = State::Undecided;
                }
            }
        }
    }
}
