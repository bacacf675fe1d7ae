//! Maximum-density subgraphs and the layer-prefix certificates that refute
//! 4-regular (and, on the bipartite variant, 3-regular) subgraphs.
//!
//! If a layered graph had a k-regular subgraph on `s` vertices, then for the
//! layer index `i` with `|B_{i+1}| < s/1000 <= |B_i|` the union of layers
//! before `i` would contain a subgraph whose edge/vertex ratio is at least
//! a fixed constant (119/100 for k = 4, 11/10 for k = 3 on the bipartite
//! variant), provided the layers after `i` hold at most `s/500` vertices.
//! The certificate computes the exact maximum density of each such prefix
//! and certifies freeness when every relevant prefix stays below the
//! threshold. The size restriction on the dense subgraph is dropped, which
//! keeps the check polynomial and sound but makes it one-sided.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::construction::LayeredGraph;
use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub subgraph: VertexSet,
    pub num_edges: usize,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
}

/// Whether some nonempty `S` has `b·e(S) - a·|S| > 0`, i.e. density above
/// `a/b`; returns the source side of the minimum cut when it does.
fn denser_than(g: &Graph, a: i128, b: i128) -> Option<VertexSet> {
    let n = g.vertex_count();
    let m = g.edge_count();
    // source, sink, one node per edge, one node per vertex
    let (s, t) = (0, 1);
    let edge_node = |e: usize| 2 + e;
    let vertex_node = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(s, edge_node(e), b);
        net.add_arc(edge_node(e), vertex_node(u), INF);
        net.add_arc(edge_node(e), vertex_node(v), INF);
    }
    for v in 0..n {
        net.add_arc(vertex_node(v), t, a);
    }
    let cut = net.max_flow(s, t);
    if b * m as i128 - cut <= 0 {
        return None;
    }
    let side = net.source_side(s);
    Some((0..n).filter(|&v| side[vertex_node(v)]).collect())
}

fn density_of(g: &Graph, s: &VertexSet) -> (usize, Rational) {
    let e = g.induced_edge_count(s);
    (e, Rational::new((e as i64).into(), (s.len() as i64).into()))
}

/// Exact maximum of `e(S)/|S|` over nonempty vertex sets `S`.
///
/// Binary search over guesses `k/N` with `N = n²`: two distinct densities
/// differ by at least `1/N`, so the last successful guess pins down the
/// optimum. A final parametric step confirms optimality exactly.
pub fn max_density_subgraph(g: &Graph) -> Result<DensityReport> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(DensityReport {
            subgraph: VertexSet::all(n),
            num_edges: 0,
            density: Rational::zero(),
        });
    }
    let grid = (n * n) as i128;
    // density > lo/grid holds at lo = 0 and fails at hi = m·grid
    let (mut lo, mut hi) = (0i128, m as i128 * grid);
    let mut best = denser_than(g, 0, grid).expect("a graph with an edge has positive density");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match denser_than(g, mid, grid) {
            Some(s) => {
                lo = mid;
                best = s;
            }
            None => hi = mid,
        }
    }
    let (mut edges, mut density) = density_of(g, &best);
    loop {
        let a = density.numer().to_i128().expect("density numerator fits");
        let b = density.denom().to_i128().expect("density denominator fits");
        match denser_than(g, a, b) {
            Some(s) => {
                best = s;
                (edges, density) = density_of(g, &best);
            }
            None => break,
        }
    }
    Ok(DensityReport {
        subgraph: best,
        num_edges: edges,
        density,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Inconclusive,
}

/// One layer index `i` of the case analysis. The prefix is `B_1 ∪ … ∪ B_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixCheck {
    pub i: usize,
    pub prefix_vertices: usize,
    /// Some subgraph size `s` in `k+1..=|V|` falls in the bracket
    /// `1000|B_{i+1}| < s <= 1000|B_i|`.
    pub active: bool,
    /// Smallest such `s`, where the tail condition is hardest.
    pub worst_case_s: Option<u64>,
    /// `Σ_{j>i} |B_j|`.
    pub tail_vertices: u64,
    /// `500 · Σ_{j>i} |B_j| <= s` at the worst case.
    pub side_condition: Option<bool>,
    #[serde(with = "rational::serde_opt_str")]
    pub max_density: Option<Rational>,
    pub below_threshold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateOutcome {
    pub k: usize,
    #[serde(with = "rational::serde_str")]
    pub threshold: Rational,
    /// Density the argument guarantees inside the prefix.
    #[serde(with = "rational::serde_str")]
    pub guaranteed_ratio: Rational,
    pub threshold_admissible: bool,
    /// Layers independent and at most one neighbor per later layer.
    pub structure_ok: bool,
    pub checks: Vec<PrefixCheck>,
    pub verdict: Verdict,
}

pub fn default_threshold() -> Rational {
    rational::ratio(11, 10)
}

/// Certificate of 4-regular-freeness for a layered graph.
pub fn prefix_certificate_4reg(lg: &LayeredGraph, threshold: &Rational) -> CertificateOutcome {
    // e(H') >= (2 - 1/100) s and e_H(X, Y) <= (4/5) s leave (119/100) s.
    let ratio = rational::ratio(119, 100);
    let structure_ok = one_neighbor_per_later_layer(lg, None);
    certify(lg, 4, threshold, ratio, structure_ok)
}

/// Certificate of 3-regular-freeness for the bipartite variant of `lg`
/// (only edges touching `B_1` are kept; `lg` may already be that variant).
pub fn prefix_certificate_3reg_bipartite(
    lg: &LayeredGraph,
    threshold: &Rational,
) -> CertificateOutcome {
    let bv = lg.bipartite_variant();
    // A 3-regular H in a bipartite graph has s/2 vertices in B_1, so
    // e_H(X, Y) <= s/2 and e(H') >= 1.49 s. If |X| <= 0.9 s then
    // e(H'') >= 0.99 s >= 1.1 |X|; otherwise |Y| <= 0.1 s, e_H(X, Y) <= 0.3 s
    // and e(H'') >= 1.19 s. The weaker case bounds the ratio.
    let small_x = rational::ratio(99, 100) / rational::ratio(9, 10);
    let large_x = rational::ratio(119, 100);
    let ratio = small_x.min(large_x);
    let structure_ok = one_neighbor_per_later_layer(&bv, Some(0));
    certify(&bv, 3, threshold, ratio, structure_ok)
}

fn certify(
    lg: &LayeredGraph,
    k: usize,
    threshold: &Rational,
    guaranteed_ratio: Rational,
    structure_ok: bool,
) -> CertificateOutcome {
    let c = lg.num_layers();
    let total = lg.graph().vertex_count() as u64;
    // b(0) = |V|, b(i) = |B_i|, b(C+1) = b(C+2) = 0
    let b = |i: usize| -> u64 {
        match i {
            0 => total,
            i if i <= c => lg.layer_sizes()[i - 1] as u64,
            _ => 0,
        }
    };
    let tail = |i: usize| -> u64 { (i + 1..=c).map(b).sum() };
    let s_min = k as u64 + 1;
    let mut checks = Vec::new();
    for i in 0..=c + 1 {
        let lower = (1000 * b(i + 1) + 1).max(s_min);
        let upper = (1000 * b(i)).min(total);
        let active = lower <= upper;
        let prefix_layers = i.saturating_sub(1);
        let prefix = lg.prefix(prefix_layers);
        let max_density = if prefix.is_empty() {
            None
        } else {
            let (sub, _) = lg.graph().induced_subgraph(&prefix);
            Some(
                max_density_subgraph(&sub)
                    .expect("prefix is nonempty")
                    .density,
            )
        };
        let below_threshold = max_density.as_ref().map_or(true, |d| d < threshold);
        let side_condition = active.then(|| 500 * tail(i) <= lower);
        checks.push(PrefixCheck {
            i,
            prefix_vertices: prefix.len(),
            active,
            worst_case_s: active.then_some(lower),
            tail_vertices: tail(i),
            side_condition,
            max_density,
            below_threshold,
        });
    }
    let threshold_admissible = *threshold <= guaranteed_ratio;
    let all_active_pass = checks
        .iter()
        .filter(|c| c.active)
        .all(|c| c.side_condition == Some(true) && c.below_threshold);
    let verdict = if threshold_admissible && structure_ok && all_active_pass {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };
    CertificateOutcome {
        k,
        threshold: threshold.clone(),
        guaranteed_ratio,
        threshold_admissible,
        structure_ok,
        checks,
        verdict,
    }
}

/// Layers independent and every vertex (only those of `only_layer`, if
/// given) has at most one neighbor in each later layer.
fn one_neighbor_per_later_layer(lg: &LayeredGraph, only_layer: Option<usize>) -> bool {
    let g = lg.graph();
    let c = lg.num_layers();
    if !(0..c).all(|i| g.is_independent(&lg.layer(i))) {
        return false;
    }
    let mut count = vec![0usize; c];
    for v in 0..g.vertex_count() {
        let li = lg.layer_of(v);
        if only_layer.is_some_and(|l| l != li) {
            continue;
        }
        count.iter_mut().for_each(|x| *x = 0);
        for &w in g.neighbors(v) {
            count[lg.layer_of(w)] += 1;
        }
        if count.iter().skip(li + 1).any(|&x| x > 1) {
            return false;
        }
    }
    if let Some(l) = only_layer {
        // every edge must touch the distinguished layer
        if g.edges()
            .iter()
            .any(|&(u, v)| lg.layer_of(u) != l && lg.layer_of(v) != l)
        {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build, explicit_params};

    #[test]
    fn clique_and_tree_densities() {
        let r = max_density_subgraph(&Graph::complete(4)).unwrap();
        assert_eq!(r.density, rational::ratio(3, 2));
        assert_eq!(r.subgraph, VertexSet::all(4));
        let r = max_density_subgraph(&Graph::path(7)).unwrap();
        assert_eq!(r.density, rational::ratio(6, 7));
        assert_eq!(r.subgraph, VertexSet::all(7));
        assert!(matches!(
            max_density_subgraph(&Graph::empty(0)),
            Err(Error::EmptyGraph)
        ));
        assert_eq!(
            max_density_subgraph(&Graph::empty(3)).unwrap().density,
            Rational::zero()
        );
    }

    #[test]
    fn densest_part_is_found() {
        // K_5 plus a long pendant path: the clique wins with density 2.
        let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().to_vec();
        edges.extend((4..12).map(|i| (i, i + 1)));
        let g = Graph::new(13, edges).unwrap();
        let r = max_density_subgraph(&g).unwrap();
        assert_eq!(r.density, rational::int(2));
        assert_eq!(r.subgraph.into_vec(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn edgeless_layers_certify() {
        let lg = build(&explicit_params(&[6], 1).unwrap()).unwrap();
        let out = prefix_certificate_4reg(&lg, &default_threshold());
        assert_eq!(out.verdict, Verdict::Certified);
        let out = prefix_certificate_3reg_bipartite(&lg, &default_threshold());
        assert_eq!(out.verdict, Verdict::Certified);
    }

    #[test]
    fn three_layer_builds_certify() {
        // With C = 3 and fewer than 1000 vertices only i = C is active, and
        // the prefix B_1 ∪ B_2 is a forest of stars.
        let lg = build(&explicit_params(&[32, 8, 2], 11).unwrap()).unwrap();
        let out = prefix_certificate_4reg(&lg, &default_threshold());
        assert_eq!(out.verdict, Verdict::Certified);
        let active: Vec<usize> = out
            .checks
            .iter()
            .filter(|c| c.active)
            .map(|c| c.i)
            .collect();
        assert_eq!(active, vec![3]);
    }

    #[test]
    fn planted_clique_is_inconclusive() {
        let lg = build(&explicit_params(&[8, 4, 2], 3).unwrap()).unwrap();
        let planted = lg
            .graph()
            .with_extra_edges(Graph::complete(5).edges().iter().copied())
            .unwrap();
        let lg = LayeredGraph::from_parts_unchecked(planted, vec![8, 4, 2]).unwrap();
        let out = prefix_certificate_4reg(&lg, &default_threshold());
        assert_eq!(out.verdict, Verdict::Inconclusive);
        let prefix = out.checks.iter().find(|c| c.i == 3).unwrap();
        assert!(prefix.max_density.as_ref().unwrap() >= &rational::ratio(3, 2));
    }

    #[test]
    fn planted_cube_blocks_bipartite_certificate() {
        // Q_3 with one side in B_1 and the other side in B_2.
        let sizes = vec![4, 4];
        let side_a = [0usize, 3, 5, 6];
        let index = |v: usize| {
            side_a
                .iter()
                .position(|&x| x == v)
                .unwrap_or_else(|| 4 + [1usize, 2, 4, 7].iter().position(|&x| x == v).unwrap())
        };
        let edges = Graph::cube()
            .edges()
            .iter()
            .map(|&(u, v)| (index(u), index(v)))
            .collect::<Vec<_>>();
        let g = Graph::new(8, edges).unwrap();
        let lg = LayeredGraph::from_parts(g, sizes).unwrap();
        let out = prefix_certificate_3reg_bipartite(&lg, &default_threshold());
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn threshold_above_guarantee_is_not_admissible() {
        let lg = build(&explicit_params(&[6], 1).unwrap()).unwrap();
        let out = prefix_certificate_4reg(&lg, &rational::ratio(6, 5));
        assert!(!out.threshold_admissible);
        assert_eq!(out.verdict, Verdict::Inconclusive);
        let out = prefix_certificate_3reg_bipartite(&lg, &rational::ratio(119, 100));
        assert!(!out.threshold_admissible);
    }
}
