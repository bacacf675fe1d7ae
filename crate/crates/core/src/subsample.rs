//! Random subsampling to a triangle-free induced subgraph with bounded
//! back-degree.
//!
//! Stage one keeps each vertex independently with probability `p`, giving
//! `Y`. Stage two walks the ordering once and keeps `v ∈ Y` when its earlier
//! neighbors inside `Y` are few (at most the threshold) and pairwise
//! non-adjacent. A triangle in the result would put two adjacent vertices
//! among the earlier neighbors of its last vertex, so none survives.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractional::chi_f_exact;
use crate::graph::{Graph, VertexOrdering, VertexSet};
use crate::rational::{self, Rational};
use crate::rng::{CoinThreshold, SplitMix64};
use crate::weighting::Weighting;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleParams {
    #[serde(with = "rational::serde_str")]
    pub p: Rational,
    pub degen_threshold: usize,
    pub seed: u64,
}

impl SubsampleParams {
    pub fn new(p: Rational, degen_threshold: usize, seed: u64) -> Result<Self> {
        if !rational::is_probability(&p) {
            return Err(Error::Param(format!(
                "p = {} is not in [0, 1]",
                rational::to_string(&p)
            )));
        }
        if degen_threshold == 0 {
            return Err(Error::Param("degen_threshold must be at least 1".into()));
        }
        Ok(SubsampleParams {
            p,
            degen_threshold,
            seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleResult {
    pub y: VertexSet,
    pub x: VertexSet,
    #[serde(with = "rational::serde_str")]
    pub retained_weight: Rational,
}

impl SubsampleResult {
    /// `X ⊆ Y`, `G[X]` triangle-free, back-degree inside `X` within the threshold.
    pub fn verify(&self, g: &Graph, ord: &VertexOrdering, threshold: usize) -> bool {
        if !self.x.is_subset_of(&self.y) || !self.y.is_valid_for(g) {
            return false;
        }
        let (sub, _) = g.induced_subgraph(&self.x);
        if sub.find_triangle().is_some() {
            return false;
        }
        let pos = ord.positions();
        self.x.iter().all(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| pos[u] < pos[v] && self.x.contains(u))
                .count()
                <= threshold
        })
    }
}

/// # Panics
/// If `ord` is not a permutation of the vertices of `g` or `w` has the
/// wrong length.
pub fn harris_subsample(
    g: &Graph,
    ord: &VertexOrdering,
    params: &SubsampleParams,
    w: &Weighting,
) -> SubsampleResult {
    assert!(
        ord.is_permutation_of(g),
        "ordering must list every vertex once"
    );
    assert_eq!(w.len(), g.vertex_count(), "one weight per vertex");
    let n = g.vertex_count();
    let coin = CoinThreshold::new(&params.p);
    let mut rng = SplitMix64::new(params.seed);
    let mut in_y = vec![false; n];
    for &v in &ord.order {
        in_y[v] = rng.coin(&coin);
    }
    let pos = ord.positions();
    let mut x = Vec::new();
    for &v in &ord.order {
        if !in_y[v] {
            continue;
        }
        let back: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] < pos[v] && in_y[u])
            .collect();
        if back.len() <= params.degen_threshold && independent(g, &back) {
            x.push(v);
        }
    }
    let x: VertexSet = x.into_iter().collect();
    let y: VertexSet = (0..n).filter(|&v| in_y[v]).collect();
    let result = SubsampleResult {
        retained_weight: w.weight_of(&x),
        y,
        x,
    };
    assert!(
        result.verify(g, ord, params.degen_threshold),
        "subsample output violates its invariants"
    );
    result
}

fn independent(g: &Graph, s: &[usize]) -> bool {
    s.iter()
        .enumerate()
        .all(|(i, &a)| s[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
}

/// Upper bounds on the two ways `v ∈ Y` can fail to enter `X`: too many
/// earlier neighbors in `Y` (Markov), or two adjacent ones (union bound).
pub fn claim_probability_bounds(
    g: &Graph,
    ord: &VertexOrdering,
    params: &SubsampleParams,
    v: usize,
) -> (Rational, Rational) {
    let pos = ord.positions();
    let back = ord.back_neighbors(g, &pos, v);
    let markov =
        &params.p * rational::int(back.len() as i64) / rational::int(params.degen_threshold as i64);
    let inner = g.induced_edge_count(&back.into_iter().collect());
    let indep = &params.p * &params.p * rational::int(inner as i64);
    (markov, indep)
}

/// Aggregate over `trials` runs with seeds `seed, seed + 1, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub x_sizes: Vec<usize>,
    #[serde(with = "rational_vec")]
    pub retained_weights: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub mean_retained_weight: Rational,
    pub mean_x_size: f64,
    /// How often each vertex ended up in `X`.
    pub membership_counts: Vec<u64>,
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(rational::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| rational::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn run_trials(
    g: &Graph,
    ord: &VertexOrdering,
    params: &SubsampleParams,
    w: &Weighting,
    trials: u64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::Param("at least one trial is required".into()));
    }
    let mut counts = vec![0u64; g.vertex_count()];
    let mut sizes = Vec::new();
    let mut weights = Vec::new();
    for t in 0..trials {
        let p = SubsampleParams {
            seed: params.seed.wrapping_add(t),
            ..params.clone()
        };
        let r = harris_subsample(g, ord, &p, w);
        r.x.iter().for_each(|v| counts[v] += 1);
        sizes.push(r.x.len());
        weights.push(r.retained_weight);
    }
    let total: Rational = weights.iter().sum();
    Ok(TrialSummary {
        trials,
        mean_retained_weight: total / rational::int(trials as i64),
        mean_x_size: sizes.iter().sum::<usize>() as f64 / trials as f64,
        x_sizes: sizes,
        retained_weights: weights,
        membership_counts: counts,
    })
}

/// The heaviest color class of an optimal fractional coloring of `G[X]`,
/// in ambient vertex labels, with its weight. This realizes the step that
/// extracts a heavy independent set from `X`.
pub fn heaviest_color_class(
    g: &Graph,
    x: &VertexSet,
    w: &Weighting,
) -> Result<(VertexSet, Rational)> {
    if x.is_empty() {
        return Ok((VertexSet::new(), Rational::zero()));
    }
    let (sub, map) = g.induced_subgraph(x);
    let coloring = chi_f_exact(&sub)?;
    let best = coloring
        .primal
        .columns
        .iter()
        .map(|c| {
            let set: VertexSet = c.set.iter().map(|v| map[v]).collect();
            let weight = w.weight_of(&set);
            (set, weight)
        })
        .max_by(|a, b| {
            a.1.cmp(&b.1)
                .then_with(|| b.0.as_slice().cmp(a.0.as_slice()))
        })
        .expect("a nonempty graph has a nonempty coloring");
    Ok(best)
}

/// The parameter choices `p = (ln ln n)^(-3/4)` and
/// `t = 2 C' (ln ln n)^(1/4)`, evaluated in floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperSubsampleParams {
    pub p: f64,
    pub threshold: f64,
    /// `p` rounded down to a multiple of 2^-32.
    #[serde(with = "rational::serde_str")]
    pub p_rational: Rational,
    /// `floor(t)`, at least 1.
    pub degen_threshold: usize,
}

pub fn paper_subsample_params(ln_ln_n: f64, c_prime: f64) -> Result<PaperSubsampleParams> {
    if !(ln_ln_n > 1.0) || !(c_prime >= 1.0) {
        return Err(Error::Param("need ln ln n > 1 and C' >= 1".into()));
    }
    let p = ln_ln_n.powf(-0.75);
    let threshold = 2.0 * c_prime * ln_ln_n.powf(0.25);
    let scale = 1u64 << 32;
    let p_rational = Rational::new(
        ((p * scale as f64).floor() as i64).into(),
        (scale as i64).into(),
    );
    Ok(PaperSubsampleParams {
        p,
        threshold,
        p_rational,
        degen_threshold: (threshold.floor() as usize).max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> VertexOrdering {
        VertexOrdering {
            order: (0..n).collect(),
            back_degree_bound: n,
        }
    }

    #[test]
    fn extremes_of_p() {
        let g = Graph::cycle(6);
        let w = Weighting::uniform(6);
        let none = harris_subsample(
            &g,
            &identity(6),
            &SubsampleParams::new(rational::int(0), 2, 1).unwrap(),
            &w,
        );
        assert!(none.x.is_empty() && none.retained_weight.is_zero());
        let all = harris_subsample(
            &g,
            &identity(6),
            &SubsampleParams::new(rational::int(1), 2, 1).unwrap(),
            &w,
        );
        assert_eq!(all.x, VertexSet::all(6));
        assert_eq!(all.retained_weight, rational::int(6));
    }

    #[test]
    fn triangle_loses_its_last_vertex() {
        let g = Graph::complete(3);
        let ord = VertexOrdering {
            order: vec![2, 0, 1],
            back_degree_bound: 2,
        };
        let r = harris_subsample(
            &g,
            &ord,
            &SubsampleParams::new(rational::int(1), 5, 0).unwrap(),
            &Weighting::uniform(3),
        );
        assert_eq!(r.x.into_vec(), vec![0, 2]);
    }

    #[test]
    fn bounds_instantiate() {
        let g = Graph::new(4, [(0, 1), (0, 3), (1, 3), (2, 3)]).unwrap();
        let params = SubsampleParams::new(rational::ratio(1, 2), 2, 0).unwrap();
        let ord = identity(4);
        assert_eq!(
            claim_probability_bounds(&g, &ord, &params, 2),
            (Rational::zero(), Rational::zero())
        );
        let (m, i) = claim_probability_bounds(&g, &ord, &params, 3);
        assert_eq!(m, rational::ratio(3, 4));
        assert_eq!(i, rational::ratio(1, 4));
    }

    #[test]
    fn params_are_checked() {
        assert!(SubsampleParams::new(rational::ratio(3, 2), 1, 0).is_err());
        assert!(SubsampleParams::new(rational::ratio(1, 2), 0, 0).is_err());
        let pp = paper_subsample_params(16.0, 1.0).unwrap();
        assert_eq!(pp.p, 0.125);
        assert_eq!(pp.degen_threshold, 4);
        assert_eq!(pp.p_rational, rational::ratio(1, 8));
    }

    #[test]
    fn heaviest_class_is_independent() {
        let g = Graph::cycle(5);
        let w = Weighting::uniform(5);
        let (s, wt) = heaviest_color_class(&g, &VertexSet::all(5), &w).unwrap();
        assert!(g.is_independent(&s));
        assert_eq!(wt, rational::int(2));
    }

    #[test]
    fn trials_are_deterministic() {
        let g = Graph::petersen();
        let params = SubsampleParams::new(rational::ratio(1, 2), 2, 9).unwrap();
        let ord = g.degeneracy().1;
        let a = run_trials(&g, &ord, &params, &Weighting::uniform(10), 20).unwrap();
        let b = run_trials(&g, &ord, &params, &Weighting::uniform(10), 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.membership_counts.iter().sum::<u64>() as usize,
            a.x_sizes.iter().sum::<usize>()
        );
    }
}
