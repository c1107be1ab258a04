//! Causal structure learning by recursive elimination of removable
//! variables, with the graph, CI-test, synthetic-data and benchmark
//! machinery around it.

pub mod bench;
pub mod ci;
pub mod graph;
pub mod marvel;
pub mod mb;
pub mod synth;
pub mod varset;

pub use varset::VarSet;
