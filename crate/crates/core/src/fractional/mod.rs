//! Fractional chromatic number by column generation, exact in rationals.
//!
//! The restricted covering LP starts from all singleton columns. After each
//! solve the dual prices are handed to [`mwis`]; a set of dual weight above
//! one is a column with negative reduced cost and joins the pool. When none
//! exists the dual prices are feasible for the full dual and both values
//! coincide.

mod coloring;
mod mwis;
mod simplex;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use coloring::{
    chromatic_number_exact, chromatic_number_exact_with_limit, DEFAULT_VERTEX_LIMIT,
};
pub use mwis::mwis;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, Rational};
use crate::weighting::Weighting;
use simplex::Master;

pub const DEFAULT_COLUMN_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub set: VertexSet,
    #[serde(with = "rational::serde_str")]
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalColoring {
    pub columns: Vec<Column>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

impl FractionalColoring {
    /// Independent columns, nonnegative coefficients summing to `value`,
    /// every vertex covered at least once.
    pub fn validate(&self, g: &Graph) -> bool {
        let mut cover = vec![Rational::zero(); g.vertex_count()];
        let mut total = Rational::zero();
        for c in &self.columns {
            if !c.set.is_valid_for(g)
                || !g.is_independent(&c.set)
                || c.coefficient < Rational::zero()
            {
                return false;
            }
            for v in c.set.iter() {
                cover[v] += &c.coefficient;
            }
            total += &c.coefficient;
        }
        total == self.value && cover.iter().all(|x| *x >= Rational::one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualWitness {
    pub weights: Weighting,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

impl DualWitness {
    /// Feasible iff no independent set weighs more than one.
    pub fn validate(&self, g: &Graph) -> bool {
        self.weights.len() == g.vertex_count()
            && self.weights.total() == self.value
            && mwis(g, &self.weights).1 <= Rational::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalResult {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub primal: FractionalColoring,
    pub dual: DualWitness,
    /// Restricted LP optimum after each round of column generation.
    #[serde(skip)]
    pub trace: Vec<Rational>,
}

pub fn chi_f_exact(g: &Graph) -> Result<FractionalResult> {
    chi_f_exact_with_limit(g, DEFAULT_COLUMN_LIMIT)
}

pub fn chi_f_exact_with_limit(g: &Graph, column_limit: usize) -> Result<FractionalResult> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut master = Master::new(n);
    let mut trace = Vec::new();
    loop {
        master.optimize();
        let value = master.value();
        trace.push(value.clone());
        let y = Weighting::new(master.duals()).expect("optimal duals are nonnegative");
        let (set, weight) = mwis(g, &y);
        if weight <= Rational::one() {
            let dual_value = y.total();
            assert_eq!(value, dual_value, "primal and dual optima must agree");
            let columns = master
                .primal()
                .into_iter()
                .map(|(set, coefficient)| Column {
                    set: VertexSet::from_sorted(set).expect("pool columns are sorted"),
                    coefficient,
                })
                .collect();
            return Ok(FractionalResult {
                primal: FractionalColoring {
                    columns,
                    value: value.clone(),
                },
                dual: DualWitness {
                    weights: y,
                    value: dual_value,
                },
                value,
                trace,
            });
        }
        if master.pool_len() >= column_limit {
            let lower = y.total() / weight;
            return Err(Error::ColumnLimitExceeded {
                limit: column_limit,
                lower,
                upper: value,
            });
        }
        master.add_column(set.into_vec());
    }
}

/// `w(V) / max_I w(I)`, a lower bound on the fractional chromatic number.
pub fn chi_f_lower_bound(g: &Graph, w: &Weighting) -> Result<Rational> {
    let total = w.total();
    if total.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let (_, best) = mwis(g, w);
    Ok(total / best)
}
