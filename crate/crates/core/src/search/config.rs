use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::TransformId;

/// Hyper-parameters of one search run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Terms whose absolute weight is below this are pruned after each
    /// greedy pass.
    pub tau: f64,
    /// The inverse-interaction operator applies once `iteration > min_i`.
    pub min_i: usize,
    /// The transformation operator applies once `iteration > min_t`.
    pub min_t: usize,
    /// Iterations run after both gates; the total is
    /// `min_i + min_t + extra_iters`.
    pub extra_iters: usize,
    pub transforms: Vec<TransformId>,
    /// Keep at most this many filtered candidates per expansion, best first.
    pub max_terms_per_node: Option<usize>,
    /// Keep at most this many leaves per generation, best first.
    pub max_leaves: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            tau: 1e-6,
            min_i: 1,
            min_t: 5,
            extra_iters: 0,
            transforms: TransformId::default_set(),
            max_terms_per_node: None,
            max_leaves: None,
        }
    }
}

impl SearchConfig {
    pub fn total_iterations(&self) -> usize {
        self.min_i + self.min_t + self.extra_iters
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {}", self.tau)));
        }
        if self.transforms.contains(&TransformId::Identity) {
            return Err(Error::InvalidArgument(
                "the transformation set may not contain the identity".into(),
            ));
        }
        if self.max_terms_per_node == Some(0) || self.max_leaves == Some(0) {
            return Err(Error::InvalidArgument("caps must be at least 1".into()));
        }
        Ok(())
    }

    /// Same settings with different caps.
    pub fn with_caps(mut self, max_terms_per_node: Option<usize>, max_leaves: Option<usize>) -> Self {
        self.max_terms_per_node = max_terms_per_node;
        self.max_leaves = max_leaves;
        self
    }

    /// Cartesian product in `tau`-major, then `min_i`, `min_t`,
    /// `extra_iters` order.
    pub fn grid(taus: &[f64], min_is: &[usize], min_ts: &[usize], extras: &[usize]) -> Vec<SearchConfig> {
        let mut out = Vec::with_capacity(taus.len() * min_is.len() * min_ts.len() * extras.len());
        for &tau in taus {
            for &min_i in min_is {
                for &min_t in min_ts {
                    for &extra_iters in extras {
                        out.push(SearchConfig {
                            tau,
                            min_i,
                            min_t,
                            extra_iters,
                            ..SearchConfig::default()
                        });
                    }
                }
            }
        }
        out
    }

    /// The full benchmark grid: tau in {1e-6..1e-2}, min_i in [1, 10),
    /// min_t in [5, 10), extra iterations in [0, 5]. 1350 configurations.
    pub fn paper_grid() -> Vec<SearchConfig> {
        SearchConfig::grid(
            &[1e-6, 1e-5, 1e-4, 1e-3, 1e-2],
            &(1..10).collect::<Vec<_>>(),
            &(5..10).collect::<Vec<_>>(),
            &(0..=5).collect::<Vec<_>>(),
        )
    }

    /// A 24-configuration subset of [`SearchConfig::paper_grid`] for
    /// laptop-scale runs.
    pub fn desk_grid() -> Vec<SearchConfig> {
        SearchConfig::grid(&[1e-6, 1e-3], &[1, 3, 5], &[5, 7], &[0, 2])
    }
}
