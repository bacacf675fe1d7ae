//! Maximum-weight independent set by branch and bound.
//!
//! Rational weights are scaled to integers over a common denominator. The
//! search works on bitsets and applies, at every node, the degree-0 and
//! dominated degree-1 reductions, a split into connected components, and a
//! greedy clique-cover upper bound. It branches on a maximum-weight vertex.
//!
//! Among optimal sets the one returned is the first when sets are compared
//! by their indicator vectors from vertex 0 upward, membership ranking
//! before absence.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::graph::{Graph, VertexSet};
use crate::rational::{self, Rational};
use crate::weighting::Weighting;

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn difference_with(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
    }

    fn union_with(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

trait Weight: Clone + Ord + Zero + Add<Output = Self> {}
impl Weight for u128 {}
impl Weight for BigInt {}

struct Solver<'a, W> {
    adj: &'a [Bits],
    w: &'a [W],
    n: usize,
}

impl<W: Weight> Solver<'_, W> {
    /// Exact optimum over `active`.
    fn solve(&self, active: Bits) -> (W, Bits) {
        let mut st = State { best: None };
        self.branch(active, W::zero(), Bits::new(self.n), &mut st);
        st.best.expect("the empty branch always completes")
    }

    fn branch(&self, mut active: Bits, mut cur: W, mut chosen: Bits, st: &mut State<W>) {
        self.reduce(&mut active, &mut cur, &mut chosen);
        if active.is_empty() {
            st.offer(cur, chosen);
            return;
        }
        let bound = cur.clone() + self.clique_cover_bound(&active);
        if st.prunes(&bound) {
            return;
        }
        let comps = self.components(&active);
        if comps.len() > 1 {
            for c in comps {
                let (cw, cs) = self.solve(c);
                cur = cur + cw;
                chosen.union_with(&cs);
            }
            st.offer(cur, chosen);
            return;
        }
        let v = active
            .iter()
            .max_by(|&a, &b| self.w[a].cmp(&self.w[b]).then(b.cmp(&a)))
            .expect("active is nonempty");
        let mut with_v = active.clone();
        with_v.remove(v);
        with_v.difference_with(&self.adj[v]);
        let mut chosen_v = chosen.clone();
        chosen_v.insert(v);
        self.branch(with_v, cur.clone() + self.w[v].clone(), chosen_v, st);
        active.remove(v);
        self.branch(active, cur, chosen, st);
    }

    fn reduce(&self, active: &mut Bits, cur: &mut W, chosen: &mut Bits) {
        loop {
            let mut changed = false;
            let verts: Vec<usize> = active.iter().collect();
            for v in verts {
                if !active.contains(v) {
                    continue;
                }
                match active.count_and(&self.adj[v]) {
                    0 => {}
                    1 => {
                        let u = self.adj[v].iter().find(|&u| active.contains(u)).unwrap();
                        if self.w[v] < self.w[u] {
                            continue;
                        }
                        active.remove(u);
                    }
                    _ => continue,
                }
                active.remove(v);
                chosen.insert(v);
                *cur = cur.clone() + self.w[v].clone();
                changed = true;
            }
            if !changed {
                return;
            }
        }
    }

    fn components(&self, active: &Bits) -> Vec<Bits> {
        let mut left = active.clone();
        let mut out = Vec::new();
        loop {
            let Some(s) = left.iter().next() else { break };
            let mut comp = Bits::new(self.n);
            comp.insert(s);
            left.remove(s);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for u in self.adj[v].iter() {
                    if left.contains(u) {
                        left.remove(u);
                        comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Greedy partition into cliques, heaviest vertices first; an
    /// independent set takes at most one vertex from each clique.
    fn clique_cover_bound(&self, active: &Bits) -> W {
        let mut order: Vec<usize> = active.iter().collect();
        order.sort_by(|&a, &b| self.w[b].cmp(&self.w[a]).then(a.cmp(&b)));
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        let mut bound = W::zero();
        for v in order {
            match cliques
                .iter_mut()
                .find(|c| c.iter().all(|&u| self.adj[v].contains(u)))
            {
                Some(c) => c.push(v),
                None => {
                    bound = bound + self.w[v].clone();
                    cliques.push(vec![v]);
                }
            }
        }
        bound
    }
}

struct State<W> {
    best: Option<(W, Bits)>,
}

impl<W: Weight> State<W> {
    fn prunes(&self, bound: &W) -> bool {
        self.best.as_ref().is_some_and(|b| *bound <= b.0)
    }

    fn offer(&mut self, w: W, set: Bits) {
        if !self.best.as_ref().is_some_and(|b| w <= b.0) {
            self.best = Some((w, set));
        }
    }
}

fn bits_adjacency(g: &Graph) -> Vec<Bits> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let mut b = Bits::new(n);
            g.neighbors(v).iter().for_each(|&u| b.insert(u));
            b
        })
        .collect()
}

fn run<W: Weight>(g: &Graph, w: &[W]) -> Vec<usize> {
    let adj = bits_adjacency(g);
    let solver = Solver {
        adj: &adj,
        w,
        n: g.vertex_count(),
    };
    let all = {
        let mut b = Bits::new(g.vertex_count());
        (0..g.vertex_count()).for_each(|v| b.insert(v));
        b
    };
    solver.solve(all).1.iter().collect()
}

/// Maximum-weight independent set with its exact weight.
///
/// # Panics
/// If `w` does not have one entry per vertex.
pub fn mwis(g: &Graph, w: &Weighting) -> (VertexSet, Rational) {
    assert_eq!(w.len(), g.vertex_count(), "one weight per vertex");
    let n = g.vertex_count();
    if n == 0 {
        return (VertexSet::new(), Rational::zero());
    }
    let den = rational::common_denominator(w.as_slice());
    // Shifting by n bits and adding 2^(n-1-v) keeps the optimum among the
    // optimal sets and prefers lower-index vertices, earliest first.
    let perturbed: Vec<BigInt> = w
        .as_slice()
        .iter()
        .enumerate()
        .map(|(v, x)| ((x.numer() * (&den / x.denom())) << n) + (BigInt::from(1u8) << (n - 1 - v)))
        .collect();
    let total: BigInt = perturbed.iter().sum();
    let set = if total.bits() < 127 {
        let small: Vec<u128> = perturbed.iter().map(|x| x.to_u128().unwrap()).collect();
        run(g, &small)
    } else {
        run(g, &perturbed)
    };
    let set = VertexSet::from_sorted(set).expect("bit iteration is sorted");
    let weight = w.weight_of(&set);
    (set, weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let (s, w) = mwis(&Graph::complete(6), &Weighting::uniform(6));
        assert_eq!((s.into_vec(), w), (vec![0], rational::int(1)));
        let (s, w) = mwis(&Graph::cycle(5), &Weighting::uniform(5));
        assert_eq!((s.into_vec(), w), (vec![0, 2], rational::int(2)));
        let (_, w) = mwis(&Graph::petersen(), &Weighting::uniform(10));
        assert_eq!(w, rational::int(4));
    }

    #[test]
    fn weights_steer_the_choice() {
        let w = Weighting::new(vec![
            rational::ratio(1, 3),
            rational::ratio(1, 2),
            rational::ratio(1, 3),
        ])
        .unwrap();
        let (s, x) = mwis(&Graph::path(3), &w);
        assert_eq!(s.into_vec(), vec![0, 2]);
        assert_eq!(x, rational::ratio(2, 3));
        let w = Weighting::new(vec![rational::int(1), rational::int(3), rational::int(1)]).unwrap();
        assert_eq!(mwis(&Graph::path(3), &w).0.into_vec(), vec![1]);
    }

    #[test]
    fn zero_weights_are_kept_when_free() {
        let w = Weighting::new(vec![rational::int(0), rational::int(1), rational::int(0)]).unwrap();
        let g = Graph::new(3, [(1, 2)]).unwrap();
        assert_eq!(mwis(&g, &w).0.into_vec(), vec![0, 1]);
    }

    #[test]
    fn huge_denominators_use_big_integers() {
        let big: BigInt = BigInt::from(1u8) << 200;
        let w = Weighting::new(vec![
            Rational::new(BigInt::from(1), big.clone()),
            Rational::new(BigInt::from(3), big.clone() + 1),
            Rational::new(BigInt::from(1), big),
        ])
        .unwrap();
        let (s, x) = mwis(&Graph::path(3), &w);
        assert_eq!(s.len(), 1);
        assert_eq!(x, w.get(1).clone());
    }
}
