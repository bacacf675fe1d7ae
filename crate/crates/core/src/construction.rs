//! The layered random graph: independent layers `B_1, …, B_C` of shrinking
//! size where every vertex picks one uniformly random neighbor in each later
//! layer.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphFile, VertexSet};
use crate::hiprec::{Hp, SizeExpr};
use crate::rational::Rational;
use crate::rng::SplitMix64;
use crate::weighting::Weighting;

/// Largest layer the builder will allocate.
pub const MAX_BUILD_VERTICES: u64 = 50_000_000;

/// Parameters for [`build`].
///
/// `epsilon` is only present when the sizes come from [`PaperParams`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: u64,
    pub epsilon: Option<f64>,
    pub layer_sizes: Vec<usize>,
    pub seed: u64,
}

impl ConstructionParams {
    pub fn num_layers(&self) -> usize {
        self.layer_sizes.len()
    }
}

/// Desk-scale parameters: explicit layer sizes, `n` is their sum.
pub fn explicit_params(layer_sizes: &[usize], seed: u64) -> Result<ConstructionParams> {
    if layer_sizes.is_empty() {
        return Err(Error::EmptyLayers);
    }
    if layer_sizes.iter().any(|&s| s == 0) {
        return Err(Error::Param("layer sizes must be at least 1".into()));
    }
    Ok(ConstructionParams {
        n: layer_sizes.iter().map(|&s| s as u64).sum(),
        epsilon: None,
        layer_sizes: layer_sizes.to_vec(),
        seed,
    })
}

/// The asymptotic parameterization for a nominal size `n`, kept in log space:
/// `ε = 1/√(ln n)`, `C = ⌊ln ln n / 10⌋`, `ln |B_i| = (1 - 20^i ε) ln n`.
#[derive(Clone, Debug)]
pub struct PaperParams {
    pub ln_n: BigFloat,
    pub epsilon: BigFloat,
    pub num_layers: usize,
    pub ln_layer_sizes: Vec<BigFloat>,
}

/// Decimal rendering of [`PaperParams`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperParamsReport {
    pub ln_n: String,
    pub epsilon: String,
    pub num_layers: usize,
    pub ln_layer_sizes: Vec<String>,
}

/// Computes the asymptotic-regime parameters for `n`, given as an expression such
/// as `e^e^40`. Fails when `n < 16` or when `C < 1`.
pub fn paper_params(n: &SizeExpr, hp: &mut Hp) -> Result<PaperParams> {
    let ln_n = n.ln_value(hp)?;
    let ln16 = hp.ln(&hp.int(16));
    if ln_n.cmp(&ln16).map_or(true, |c| c < 0) {
        return Err(Error::Param("n must be at least 16".into()));
    }
    let lnln = hp.ln(&ln_n);
    let c_real = hp.div(&lnln, &hp.int(10));
    let num_layers = floor_with_tolerance(hp, &c_real)?;
    if num_layers < 1 {
        return Err(Error::Param(format!(
            "C = floor(ln ln n / 10) = {num_layers}; n is below the construction's regime, \
             use explicit layer sizes instead"
        )));
    }
    let root = hp.sqrt(&ln_n);
    let epsilon = hp.div(&hp.int(1), &root);
    let mut ln_layer_sizes = Vec::with_capacity(num_layers);
    for i in 1..=num_layers {
        ln_layer_sizes.push(ln_layer_size(hp, &ln_n, &epsilon, i as i64));
    }
    Ok(PaperParams {
        ln_n,
        epsilon,
        num_layers,
        ln_layer_sizes,
    })
}

/// `ln |B_i| = (1 - 20^i ε) ln n` for 1-based `i` (real-valued, unrounded).
pub fn ln_layer_size(hp: &mut Hp, ln_n: &BigFloat, epsilon: &BigFloat, i: i64) -> BigFloat {
    let twenty = hp.int(20);
    let factor = hp.mul(&hp.powi(&twenty, i as usize), epsilon);
    let one_minus = hp.sub(&hp.int(1), &factor);
    hp.mul(&one_minus, ln_n)
}

/// Floor that treats values within the working precision of an integer as
/// that integer, so `ln ln e^(e^10) / 10` yields 1 despite rounding.
fn floor_with_tolerance(hp: &mut Hp, x: &BigFloat) -> Result<usize> {
    let nearest = x.round(0, astro_float::RoundingMode::ToEven);
    let tol = hp.pow10_neg(hp.digits().saturating_sub(10).max(10));
    let diff = hp.sub(x, &nearest).abs();
    let v = if diff.cmp(&tol).map_or(false, |c| c <= 0) {
        nearest
    } else {
        hp.floor(x)
    };
    let f = hp.to_f64(&v);
    if !(f.is_finite()) || f > 1.0e6 {
        return Err(Error::Param(
            "number of layers is unreasonably large".into(),
        ));
    }
    Ok(f.max(0.0) as usize)
}

impl PaperParams {
    /// `max(1, round(|B_i|))` when every layer is small enough to build.
    pub fn layer_sizes(&self, hp: &mut Hp) -> Result<Vec<usize>> {
        let limit = (MAX_BUILD_VERTICES as f64).ln();
        self.ln_layer_sizes
            .iter()
            .map(|l| {
                let f = hp.to_f64(l);
                if f > limit {
                    return Err(Error::Param(format!(
                        "layer size e^{} exceeds the buildable limit of {MAX_BUILD_VERTICES}",
                        hp.format(l)
                    )));
                }
                let size = hp.exp(l);
                let rounded = hp.to_f64(&size.round(0, astro_float::RoundingMode::ToEven));
                Ok((rounded as usize).max(1))
            })
            .collect()
    }

    pub fn to_construction(&self, seed: u64, hp: &mut Hp) -> Result<ConstructionParams> {
        let sizes = self.layer_sizes(hp)?;
        let nominal = hp.exp(&self.ln_n);
        let n = hp.to_f64(&nominal.round(0, astro_float::RoundingMode::ToEven));
        Ok(ConstructionParams {
            n: n as u64,
            epsilon: Some(hp.to_f64(&self.epsilon)),
            layer_sizes: sizes,
            seed,
        })
    }

    pub fn report(&self, hp: &mut Hp) -> PaperParamsReport {
        PaperParamsReport {
            ln_n: hp.format(&self.ln_n),
            epsilon: hp.format(&self.epsilon),
            num_layers: self.num_layers,
            ln_layer_sizes: self.ln_layer_sizes.iter().map(|l| hp.format(l)).collect(),
        }
    }
}

/// A graph whose vertex set is split into contiguous layers
/// `0..|B_1|, |B_1|..|B_1|+|B_2|, …`, each an independent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    graph: Graph,
    layer_sizes: Vec<usize>,
    layer_of: Vec<usize>,
    starts: Vec<usize>,
}

impl LayeredGraph {
    /// Wraps `graph` with the given layer partition. Checks that the sizes
    /// cover the vertex set and that every layer is independent; the
    /// one-neighbor-per-later-layer property is not required here (see
    /// [`LayeredGraph::check_construction_invariants`]).
    pub fn from_parts(graph: Graph, layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.is_empty() {
            return Err(Error::EmptyLayers);
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Param("layer sizes must be at least 1".into()));
        }
        if layer_sizes.iter().sum::<usize>() != graph.vertex_count() {
            return Err(Error::Param(format!(
                "layer sizes sum to {}, graph has {} vertices",
                layer_sizes.iter().sum::<usize>(),
                graph.vertex_count()
            )));
        }
        let lg = Self::assemble(graph, layer_sizes);
        if let Some(&(u, v)) = lg
            .graph
            .edges()
            .iter()
            .find(|&&(u, v)| lg.layer_of[u] == lg.layer_of[v])
        {
            return Err(Error::Param(format!(
                "edge ({u}, {v}) lies inside layer {}",
                lg.layer_of[u] + 1
            )));
        }
        Ok(lg)
    }

    /// Like [`LayeredGraph::from_parts`] but allows edges inside a layer.
    /// Used to plant structures for testing certificates.
    pub fn from_parts_unchecked(graph: Graph, layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.iter().sum::<usize>() != graph.vertex_count() {
            return Err(Error::Param("layer sizes do not cover the graph".into()));
        }
        Ok(Self::assemble(graph, layer_sizes))
    }

    fn assemble(graph: Graph, layer_sizes: Vec<usize>) -> Self {
        let mut layer_of = Vec::with_capacity(graph.vertex_count());
        let mut starts = Vec::with_capacity(layer_sizes.len() + 1);
        let mut start = 0;
        for (i, &s) in layer_sizes.iter().enumerate() {
            starts.push(start);
            layer_of.extend(std::iter::repeat(i).take(s));
            start += s;
        }
        starts.push(start);
        LayeredGraph {
            graph,
            layer_sizes,
            layer_of,
            starts,
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let layers = file
            .layers
            .clone()
            .ok_or_else(|| Error::Format("graph file has no layer information".into()))?;
        LayeredGraph::from_parts(file.graph()?, layers)
    }

    pub fn to_file(&self) -> GraphFile {
        self.graph.to_file(Some(self.layer_sizes.clone()))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn num_layers(&self) -> usize {
        self.layer_sizes.len()
    }

    /// 0-based layer index of `v`.
    pub fn layer_of(&self, v: usize) -> usize {
        self.layer_of[v]
    }

    /// Vertex range of the 0-based layer `i`.
    pub fn layer_range(&self, i: usize) -> std::ops::Range<usize> {
        self.starts[i]..self.starts[i + 1]
    }

    pub fn layer(&self, i: usize) -> VertexSet {
        self.layer_range(i).collect()
    }

    /// Union of the first `count` layers.
    pub fn prefix(&self, count: usize) -> VertexSet {
        (0..self.starts[count.min(self.num_layers())]).collect()
    }

    /// `Σ_i |B_i| · (C - i)` with 1-based `i`.
    pub fn expected_edge_count(&self) -> usize {
        let c = self.num_layers();
        self.layer_sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| s * (c - 1 - i))
            .sum()
    }

    /// Verifies everything the random construction guarantees: independent
    /// layers, exactly one neighbor in every later layer for each vertex,
    /// and the resulting edge count.
    pub fn check_construction_invariants(&self) -> std::result::Result<(), String> {
        let c = self.num_layers();
        for i in 0..c {
            if !self.graph.is_independent(&self.layer(i)) {
                return Err(format!("layer {} is not independent", i + 1));
            }
        }
        let mut per_layer = vec![0usize; c];
        for v in 0..self.graph.vertex_count() {
            per_layer.iter_mut().for_each(|x| *x = 0);
            for &w in self.graph.neighbors(v) {
                per_layer[self.layer_of[w]] += 1;
            }
            let li = self.layer_of[v];
            for (j, &count) in per_layer.iter().enumerate().skip(li + 1) {
                if count != 1 {
                    return Err(format!(
                        "vertex {v} in layer {} has {count} neighbors in layer {}",
                        li + 1,
                        j + 1
                    ));
                }
            }
        }
        if self.graph.edge_count() != self.expected_edge_count() {
            return Err(format!(
                "edge count {} differs from {}",
                self.graph.edge_count(),
                self.expected_edge_count()
            ));
        }
        Ok(())
    }

    /// Keeps only the edges incident to the first layer. The result is
    /// bipartite with parts `B_1` and the remaining vertices.
    pub fn bipartite_variant(&self) -> LayeredGraph {
        let first = self.layer_range(0);
        let edges = self
            .graph
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| first.contains(&u) || first.contains(&v));
        let g = Graph::new(self.graph.vertex_count(), edges).expect("subgraph of a simple graph");
        Self::assemble(g, self.layer_sizes.clone())
    }

    /// Weight `1/|B_i|` on every vertex of layer `i`; the total is exactly `C`.
    pub fn paper_weighting(&self) -> Weighting {
        let weights = self
            .layer_of
            .iter()
            .map(|&i| Rational::new(1.into(), (self.layer_sizes[i] as i64).into()))
            .collect();
        Weighting::new(weights).expect("weights are positive")
    }
}

/// Samples the layered graph.
///
/// Draw order is fixed: layers ascending, vertices ascending within a layer,
/// then target layers ascending, one uniform draw per `(vertex, later layer)`
/// from a SplitMix64 stream seeded with `params.seed`.
pub fn build(params: &ConstructionParams) -> Result<LayeredGraph> {
    let sizes = &params.layer_sizes;
    if sizes.is_empty() {
        return Err(Error::EmptyLayers);
    }
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    if total > MAX_BUILD_VERTICES {
        return Err(Error::Param(format!(
            "{total} vertices exceed the buildable limit of {MAX_BUILD_VERTICES}"
        )));
    }
    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0usize;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    let mut rng = SplitMix64::new(params.seed);
    let mut edges = Vec::new();
    for (i, &si) in sizes.iter().enumerate() {
        for v in starts[i]..starts[i] + si {
            for j in i + 1..sizes.len() {
                let target = starts[j] + rng.below(sizes[j] as u64) as usize;
                edges.push((v, target));
            }
        }
    }
    let graph = Graph::new(acc, edges)?;
    LayeredGraph::from_parts(graph, sizes.clone())
}
