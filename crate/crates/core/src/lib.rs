pub mod bounds;
pub mod cli;
pub mod construction;
pub mod density;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod fractional;
pub mod graph;
pub mod hiprec;
pub mod rational;
pub mod regular;
pub mod rng;
pub mod subsample;
pub mod weighting;
