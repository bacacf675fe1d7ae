use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("malformed graph file: {0}")]
    Format(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("layer size list is empty")]
    EmptyLayers,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("total weight is zero")]
    ZeroWeight,
    #[error("graph has {vertices} vertices, above the limit of {limit}")]
    SizeLimit { vertices: usize, limit: usize },
    #[error("column limit {limit} reached; chi_f lies in [{lower}, {upper}]")]
    ColumnLimitExceeded {
        limit: usize,
        lower: Rational,
        upper: Rational,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
