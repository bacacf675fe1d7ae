//! Exhaustive oracles for small graphs. Nothing here calls the solvers
//! under test.

#![allow(dead_code)]

use num_traits::{One, Zero};
use regfree::graph::Graph;
use regfree::rational::{self, Rational};
use regfree::rng::SplitMix64;
use regfree::weighting::Weighting;

/// `G(n, num/den)` drawn from `rng`.
pub fn random_graph(rng: &mut SplitMix64, n: usize, num: u64, den: u64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.below(den) < num {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_weights(rng: &mut SplitMix64, n: usize) -> Weighting {
    Weighting::new(
        (0..n)
            .map(|_| rational::ratio(1 + rng.below(6) as i64, 1 + rng.below(4) as i64))
            .collect(),
    )
    .unwrap()
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect()
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| mask >> v & 1 == 1)
}

pub fn is_independent_mask(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| adj[v] & mask == 0)
}

/// Maximum density over all nonempty vertex subsets.
pub fn brute_max_density(g: &Graph) -> Rational {
    let n = g.vertex_count();
    let mut best = Rational::zero();
    for mask in 1u32..1 << n {
        let e = g
            .edges()
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        let d = rational::ratio(e as i64, mask.count_ones() as i64);
        if d > best {
            best = d;
        }
    }
    best
}

/// Maximum-weight independent set; among optimal sets, the one whose
/// sorted vertex list is lexicographically smallest.
pub fn brute_mwis(g: &Graph, w: &Weighting) -> (Vec<usize>, Rational) {
    let adj = adjacency_masks(g);
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for mask in 0u32..1 << g.vertex_count() {
        if !is_independent_mask(&adj, mask) {
            continue;
        }
        let set: Vec<usize> = members(mask).collect();
        let weight: Rational = set.iter().map(|&v| w.get(v).clone()).sum();
        let better = match &best {
            None => true,
            Some((bs, bw)) => weight > *bw || (weight == *bw && set < *bs),
        };
        if better {
            best = Some((set, weight));
        }
    }
    best.unwrap()
}

/// Does some nonempty edge subset give every touched vertex degree exactly `k`?
pub fn brute_has_k_regular(g: &Graph, k: usize) -> bool {
    let edges = g.edges();
    let m = edges.len();
    assert!(m <= 24, "edge-subset enumeration is limited to 24 edges");
    let n = g.vertex_count();
    let mut deg = vec![0usize; n];
    (1u32..1 << m).any(|mask| {
        deg.iter_mut().for_each(|d| *d = 0);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg.iter().all(|&d| d == 0 || d == k)
    })
}

pub fn maximal_independent_sets(g: &Graph) -> Vec<u32> {
    let adj = adjacency_masks(g);
    let n = g.vertex_count();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    (0u32..=full)
        .filter(|&m| is_independent_mask(&adj, m))
        .filter(|&m| (0..n).all(|v| m >> v & 1 == 1 || adj[v] & m != 0))
        .collect()
}

/// Fractional chromatic number by solving the full LP
/// `max Σ w_v` subject to `Σ_{v ∈ I} w_v ≤ 1` over every maximal
/// independent set `I`, `w ≥ 0`, with a dense tableau and Bland's rule.
pub fn brute_chi_f(g: &Graph) -> Rational {
    let n = g.vertex_count();
    if n == 0 {
        return Rational::zero();
    }
    let sets = maximal_independent_sets(g);
    let rows = sets.len();
    let cols = n + rows;
    // Row r: coefficients of w (n), slacks (rows), then the right-hand side.
    let mut t: Vec<Vec<Rational>> = sets
        .iter()
        .enumerate()
        .map(|(r, &s)| {
            let mut row = vec![Rational::zero(); cols + 1];
            members(s).for_each(|v| row[v] = Rational::one());
            row[n + r] = Rational::one();
            row[cols] = Rational::one();
            row
        })
        .collect();
    // Reduced costs for maximization: entering columns have negative cost.
    let mut cost = vec![Rational::zero(); cols + 1];
    (0..n).for_each(|v| cost[v] = -Rational::one());
    let mut basis: Vec<usize> = (n..cols).collect();
    loop {
        let Some(e) = (0..cols).find(|&j| cost[j] < Rational::zero()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if t[r][e] > Rational::zero() {
                let ratio = &t[r][cols] / &t[r][e];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (r, _) = leave.expect("the LP is bounded by the singleton constraints");
        let piv = t[r][e].clone();
        t[r].iter_mut().for_each(|x| *x /= &piv);
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[e].is_zero() {
                let f = row[e].clone();
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(x, p)| *x -= &f * p);
            }
        }
        let f = cost[e].clone();
        cost.iter_mut()
            .zip(&pivot_row)
            .for_each(|(x, p)| *x -= &f * p);
        basis[r] = e;
    }
    cost[cols].clone()
}

/// The largest vertex set whose induced subgraph has minimum degree `≥ k`.
pub fn brute_k_core(g: &Graph, k: usize) -> Vec<usize> {
    let adj = adjacency_masks(g);
    let n = g.vertex_count();
    let mut best = 0u32;
    for mask in 1u32..1 << n {
        if members(mask).all(|v| (adj[v] & mask).count_ones() as usize >= k) {
            best |= mask;
        }
    }
    members(best).collect()
}
