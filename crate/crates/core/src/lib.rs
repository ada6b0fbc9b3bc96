//! Symbolic regression over the Interaction-Transformation representation.
//!
//! A model is a weighted sum of terms `t(x0^k0 * ... * x{d-1}^k{d-1})`, where
//! the `k` are integers and `t` is drawn from a small set of unary
//! functions. [`search::run`] grows such models with a greedy breadth-first
//! search tree, fitting every candidate's weights by ordinary least squares
//! and ranking nodes by `1 / (1 + MAE)`.
//!
//! The [`bench`] module generates the analytic benchmark targets and the
//! random-polynomial recovery family; [`harness`] wires everything into the
//! `symtree` command line tool.

pub mod bench;
pub mod dataset;
pub mod error;
pub mod expression;
pub mod fit;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod search;
pub mod term;
pub mod transform;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use expression::Expression;
pub use fit::{design_matrix, fit, mae, score, FitResult};
pub use search::{grid_search, run, SearchConfig, SearchNode};
pub use term::{make_linear_terms, Term};
pub use transform::TransformId;
