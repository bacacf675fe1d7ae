use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::rational::{self, Rational};

/// Nonnegative exact-rational weight per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting(Vec<Rational>);

impl Weighting {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(v) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::Param(format!("weight of vertex {v} is negative")));
        }
        Ok(Weighting(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Weighting(vec![rational::int(1); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.0[v]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn weight_of(&self, s: &VertexSet) -> Rational {
        s.iter().fold(Rational::zero(), |acc, v| acc + &self.0[v])
    }

    /// Every weight multiplied by `factor`, which must be nonnegative.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Weighting::new(self.0.iter().map(|w| w * factor).collect())
    }

    /// Weights restricted to `s`, reindexed in the order of `s`.
    pub fn restricted(&self, s: &VertexSet) -> Self {
        Weighting(s.iter().map(|v| self.0[v].clone()).collect())
    }

    /// `"a/b"` strings, one per vertex.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::to_string).collect()
    }
}

impl Serialize for Weighting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weighting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let parsed = raw
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Weighting::new(parsed).map_err(serde::de::Error::custom)
    }
}
