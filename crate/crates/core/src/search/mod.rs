//! Greedy breadth-first search over interaction-transformation models.
//!
//! The root is the OLS fit of the plain input variables. Each iteration
//! replaces every leaf by its children: candidates produced by the
//! interaction, inverse-interaction, and transformation operators are
//! filtered, then split into children by repeated greedy passes, and
//! finally each child drops terms whose weight magnitude falls below `tau`.

mod basis;
mod config;
pub mod operators;
mod tree;

pub use config::SearchConfig;
pub use operators::{interaction, inverse_interaction, transformation};
pub use tree::{
    expand, filter_candidates, greedy_search, grid_search, run, run_traced, simplify,
    ExpansionRecord, SearchNode, Trace,
};
