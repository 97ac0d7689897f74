//! Exact algorithms for Min-(s,t)-Cut Prevention: given a graph with edge
//! costs and capacities, decide whether a defender with budget `d` can
//! protect edges so that every `(s,t)`-cut avoiding them has capacity above
//! the attacker budget `a`.

pub mod error;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod solve;
pub mod transform;
pub mod twdp;

pub use error::{Error, Result};
pub use instance::{CutSet, DefenseSet, Edge, EdgeSpec, Instance, Normalized, Variant};
