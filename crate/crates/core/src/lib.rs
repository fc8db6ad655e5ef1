//! Approximation pipeline for maximum integral multiflow on graphs embedded
//! on orientable surfaces, with exact oracles and instance generators.

pub mod exact_oracle;
pub mod instance_io;
pub mod multiflow_lp;
pub mod pipeline;
pub mod rational;
pub mod rounding_nonseparating;
pub mod rounding_separating;
pub mod simplex;
pub mod surface_graph;
pub mod topology;
pub mod uncrossing;
