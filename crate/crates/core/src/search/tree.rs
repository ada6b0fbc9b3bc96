use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::expression::Expression;
use crate::fit::{score_from_mae, FitResult};
use crate::term::{make_linear_terms, Term};

use super::basis::Basis;
use super::config::SearchConfig;
use super::operators::{interaction, inverse_interaction, transformation};

/// Relative training MAE treated as a perfect score.
pub const EXACT_FIT_RTOL: f64 = 1e-12;

/// A fitted expression placed in the search tree.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub fit: FitResult,
    /// Iteration that produced the node; the root has depth 0.
    pub depth: usize,
    /// Creation sequence number within a run, used to break ties.
    pub created: usize,
}

impl SearchNode {
    pub fn score(&self) -> f64 {
        self.fit.score
    }

    pub fn terms(&self) -> &[Term] {
        self.fit.expression.terms()
    }

    pub fn expression(&self) -> &Expression {
        &self.fit.expression
    }

    /// Fits `terms` on `train` and wraps the result as a depth-0 node.
    pub fn fit(terms: &[Term], train: &Dataset) -> Result<SearchNode> {
        if terms.iter().any(|t| t.dim() != train.d()) {
            return Err(Error::InvalidArgument("term dimension differs from data".into()));
        }
        Ok(SearchNode {
            fit: Searcher::new(train).fit(terms)?,
            depth: 0,
            created: 0,
        })
    }

    /// Higher score, then fewer terms, then earlier creation.
    fn better_than(&self, other: &SearchNode) -> bool {
        if self.score() != other.score() {
            return self.score() > other.score();
        }
        if self.terms().len() != other.terms().len() {
            return self.terms().len() < other.terms().len();
        }
        self.created < other.created
    }
}

/// What happened during one call to expand.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRecord {
    pub iteration: usize,
    pub parent_score: f64,
    pub parent_terms: Vec<Term>,
    pub n_interaction: usize,
    pub n_inverse: usize,
    pub n_transformation: usize,
    /// Candidates that survived filtering, in greedy order.
    pub filtered: Vec<Term>,
    /// Terms accepted by each greedy pass, before simplification.
    pub accepted: Vec<Vec<Term>>,
    /// Scores of the emitted children, after simplification.
    pub child_scores: Vec<f64>,
    /// True when no child was produced and the parent was returned.
    pub returned_parent: bool,
}

/// Optional instrumentation collected by [`run_traced`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub expansions: Vec<ExpansionRecord>,
    /// Best leaf score after each iteration; index 0 is the root.
    pub best_per_iteration: Vec<f64>,
    pub leaves_per_iteration: Vec<usize>,
}

/// Per-run state: the training data and a cache of evaluated term columns.
struct Searcher<'a> {
    train: &'a Dataset,
    y: Rc<[f64]>,
    // None marks a column with a non-finite entry
    columns: RefCell<HashMap<Term, Option<Rc<[f64]>>>>,
    created: usize,
}

impl<'a> Searcher<'a> {
    fn new(train: &'a Dataset) -> Self {
        Searcher {
            train,
            y: Rc::from(train.y()),
            columns: RefCell::new(HashMap::new()),
            created: 0,
        }
    }

    fn next_id(&mut self) -> usize {
        self.created += 1;
        self.created
    }

    fn column(&self, t: &Term) -> Option<Rc<[f64]>> {
        if let Some(c) = self.columns.borrow().get(t) {
            return c.clone();
        }
        let values: Vec<f64> = self.train.rows().map(|row| t.eval_unchecked(row)).collect();
        let col = values
            .iter()
            .all(|v| v.is_finite())
            .then(|| Rc::from(values));
        self.columns.borrow_mut().insert(t.clone(), col.clone());
        col
    }

    fn basis(&self, terms: &[Term]) -> Option<Basis> {
        let mut b = Basis::new(self.y.clone());
        for t in terms {
            b.append(self.column(t)?);
        }
        Some(b)
    }

    fn fit_result(&self, terms: &[Term], basis: &Basis) -> Option<FitResult> {
        let (intercept, weights, mae) = basis.fit();
        let expression = Expression::new(terms.to_vec(), weights, intercept, self.train.d()).ok()?;
        Some(FitResult {
            expression,
            train_mae: mae,
            score: score_from_mae(mae),
            rank: basis.rank(),
        })
    }

    fn fit(&self, terms: &[Term]) -> Result<FitResult> {
        let basis = self.basis(terms).ok_or(Error::IndeterminateTerm)?;
        self.fit_result(terms, &basis).ok_or(Error::NumericFailure)
    }

    /// Dedup, domain check, then strict improvement over the parent. Returns
    /// survivors with the score each reaches when added alone.
    fn filter(&self, node: &SearchNode, candidates: &[Term]) -> Vec<(Term, f64)> {
        let Some(basis) = self.basis(node.terms()) else {
            return Vec::new();
        };
        let base = score_from_mae(basis.fit().2);
        let mut seen: HashSet<&Term> = node.terms().iter().collect();
        let mut out = Vec::new();
        for c in candidates {
            // a constant monomial duplicates the intercept column
            if c.is_constant() || !seen.insert(c) {
                continue;
            }
            let Some(col) = self.column(c) else {
                continue;
            };
            let s = score_from_mae(basis.mae_with(&col));
            if s > base {
                out.push((c.clone(), s));
            }
        }
        out
    }

    /// One greedy pass. Returns the grown fit, the accepted terms, and the
    /// rejected (unused) terms.
    fn greedy(&self, node: &SearchNode, candidates: &[Term]) -> (FitResult, Vec<Term>, Vec<Term>) {
        let Some(mut basis) = self.basis(node.terms()) else {
            return (node.fit.clone(), Vec::new(), candidates.to_vec());
        };
        let mut current = score_from_mae(basis.fit().2);
        let mut terms = node.terms().to_vec();
        let mut accepted = Vec::new();
        let mut unused = Vec::new();
        for c in candidates {
            let col = if terms.contains(c) { None } else { self.column(c) };
            let s = col.as_ref().map_or(0.0, |col| score_from_mae(basis.mae_with(col)));
            match col {
                Some(col) if s > current => {
                    basis.append(col);
                    terms.push(c.clone());
                    accepted.push(c.clone());
                    current = s;
                }
                _ => unused.push(c.clone()),
            }
        }
        if accepted.is_empty() {
            return (node.fit.clone(), accepted, unused);
        }
        match self.fit_result(&terms, &basis) {
            Some(fit) => (fit, accepted, unused),
            None => (node.fit.clone(), Vec::new(), candidates.to_vec()),
        }
    }

    fn simplify(&self, fit: &FitResult, tau: f64) -> FitResult {
        let e = &fit.expression;
        let keep: Vec<Term> = e
            .terms()
            .iter()
            .zip(e.weights())
            .filter(|(_, w)| w.abs() >= tau)
            .map(|(t, _)| t.clone())
            .collect();
        if keep.len() == e.len() {
            return fit.clone();
        }
        self.fit(&keep).unwrap_or_else(|_| fit.clone())
    }

    fn expand(
        &mut self,
        node: &SearchNode,
        cfg: &SearchConfig,
        iteration: usize,
        trace: Option<&mut Trace>,
    ) -> Vec<SearchNode> {
        let mut candidates = interaction(node.terms());
        let n_interaction = candidates.len();
        let mut n_inverse = 0;
        let mut n_transformation = 0;
        if iteration > cfg.min_i {
            let inv = inverse_interaction(node.terms());
            n_inverse = inv.len();
            candidates.extend(inv);
        }
        if iteration > cfg.min_t {
            let tr = transformation(node.terms(), &cfg.transforms);
            n_transformation = tr.len();
            candidates.extend(tr);
        }

        let mut filtered = self.filter(node, &candidates);
        if let Some(cap) = cfg.max_terms_per_node {
            if filtered.len() > cap {
                filtered.sort_by(|a, b| b.1.total_cmp(&a.1));
                filtered.truncate(cap);
            }
        }
        let mut remaining: Vec<Term> = filtered.into_iter().map(|(t, _)| t).collect();
        let filtered_terms = trace.is_some().then(|| remaining.clone());

        let mut children = Vec::new();
        let mut accepted_sets = Vec::new();
        while !remaining.is_empty() {
            let (grown, accepted, unused) = self.greedy(node, &remaining);
            if accepted.is_empty() {
                // every filtered candidate improves the parent on its own, so
                // a pass always accepts its first term
                debug_assert!(false, "greedy pass accepted nothing");
                break;
            }
            let simplified = self.simplify(&grown, cfg.tau);
            // pruning may not leave a child worse than its parent
            let fit = if simplified.score >= node.score() {
                simplified
            } else {
                grown
            };
            children.push(SearchNode {
                fit,
                depth: iteration,
                created: self.next_id(),
            });
            accepted_sets.push(accepted);
            remaining = unused;
        }

        let returned_parent = children.is_empty();
        if returned_parent {
            children.push(node.clone());
        }

        if let Some(trace) = trace {
            trace.expansions.push(ExpansionRecord {
                iteration,
                parent_score: node.score(),
                parent_terms: node.terms().to_vec(),
                n_interaction,
                n_inverse,
                n_transformation,
                filtered: filtered_terms.unwrap_or_default(),
                accepted: accepted_sets,
                child_scores: children.iter().map(SearchNode::score).collect(),
                returned_parent,
            });
        }
        children
    }

    fn run(&mut self, cfg: &SearchConfig, mut trace: Option<&mut Trace>) -> Result<SearchNode> {
        cfg.validate()?;
        let root_terms = make_linear_terms(self.train.d())?;
        let root_fit = self.fit(&root_terms)?;
        let root = SearchNode {
            fit: root_fit,
            depth: 0,
            created: self.next_id(),
        };
        let mut leaves = vec![root];
        if let Some(t) = trace.as_deref_mut() {
            t.best_per_iteration.push(leaves[0].score());
            t.leaves_per_iteration.push(1);
        }

        let gates_open_after = cfg.min_i.max(cfg.min_t) + 1;
        let exact = exact_fit_threshold(self.train);
        for iteration in 1..=cfg.total_iterations() {
            if best_of(&leaves).fit.train_mae <= exact {
                break;
            }
            let mut next = Vec::new();
            for leaf in &leaves {
                next.extend(self.expand(leaf, cfg, iteration, trace.as_deref_mut()));
            }
            let mut next = dedup_leaves(next);
            if let Some(cap) = cfg.max_leaves {
                next = prune_leaves(next, cap);
            }
            let changed = term_sets(&next) != term_sets(&leaves);
            leaves = next;
            if let Some(t) = trace.as_deref_mut() {
                t.best_per_iteration.push(best_of(&leaves).score());
                t.leaves_per_iteration.push(leaves.len());
            }
            // nothing moved and no operator can still switch on
            if !changed && iteration >= gates_open_after {
                break;
            }
        }
        Ok(best_of(&leaves).clone())
    }
}

/// Training error at which a fit counts as exact: no leaf can meaningfully
/// beat it, so the search stops.
fn exact_fit_threshold(train: &Dataset) -> f64 {
    let scale = train.y().iter().map(|v| v.abs()).sum::<f64>() / train.n() as f64;
    EXACT_FIT_RTOL * scale.max(1.0)
}

fn best_of(leaves: &[SearchNode]) -> &SearchNode {
    leaves
        .iter()
        .reduce(|best, n| if n.better_than(best) { n } else { best })
        .expect("at least one leaf")
}

fn term_set(n: &SearchNode) -> Vec<Term> {
    let mut key = n.terms().to_vec();
    key.sort();
    key
}

fn term_sets(leaves: &[SearchNode]) -> Vec<Vec<Term>> {
    let mut sets: Vec<Vec<Term>> = leaves.iter().map(term_set).collect();
    sets.sort();
    sets
}

/// Drops leaves whose term set repeats an earlier leaf.
fn dedup_leaves(leaves: Vec<SearchNode>) -> Vec<SearchNode> {
    let mut seen = HashSet::new();
    leaves.into_iter().filter(|n| seen.insert(term_set(n))).collect()
}

/// Keeps the `cap` best leaves, preserving their relative order.
fn prune_leaves(leaves: Vec<SearchNode>, cap: usize) -> Vec<SearchNode> {
    if leaves.len() <= cap {
        return leaves;
    }
    let mut order: Vec<usize> = (0..leaves.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&leaves[a], &leaves[b]);
        if x.better_than(y) {
            std::cmp::Ordering::Less
        } else if y.better_than(x) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    let keep: HashSet<usize> = order.into_iter().take(cap).collect();
    leaves
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, n)| n)
        .collect()
}

/// Removes duplicates (of the node's terms or of earlier candidates),
/// candidates with non-finite values on `train`, and candidates that do not
/// strictly improve the node's score when added alone.
pub fn filter_candidates(node: &SearchNode, candidates: &[Term], train: &Dataset) -> Vec<Term> {
    Searcher::new(train)
        .filter(node, candidates)
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

/// One greedy pass: each candidate is kept iff refitting with it strictly
/// raises the score. Returns the grown node and the rejected candidates.
pub fn greedy_search(node: &SearchNode, candidates: &[Term], train: &Dataset) -> (SearchNode, Vec<Term>) {
    let (fit, _, unused) = Searcher::new(train).greedy(node, candidates);
    (
        SearchNode {
            fit,
            depth: node.depth,
            created: node.created,
        },
        unused,
    )
}

/// Drops terms with `|weight| < tau` and refits the rest.
pub fn simplify(node: &SearchNode, tau: f64, train: &Dataset) -> SearchNode {
    SearchNode {
        fit: Searcher::new(train).simplify(&node.fit, tau),
        ..node.clone()
    }
}

/// Expands one node into its children, or returns the node itself when no
/// candidate survives filtering.
pub fn expand(node: &SearchNode, cfg: &SearchConfig, train: &Dataset, iteration: usize) -> Vec<SearchNode> {
    let mut s = Searcher::new(train);
    s.created = node.created;
    s.expand(node, cfg, iteration, None)
}

/// Runs the search and returns the best final leaf.
pub fn run(train: &Dataset, cfg: &SearchConfig) -> Result<SearchNode> {
    Searcher::new(train).run(cfg, None)
}

/// Like [`run`], also recording every expansion.
pub fn run_traced(train: &Dataset, cfg: &SearchConfig) -> Result<(SearchNode, Trace)> {
    let mut trace = Trace::default();
    let best = Searcher::new(train).run(cfg, Some(&mut trace))?;
    Ok((best, trace))
}

/// Runs every configuration and keeps the one with the best training score
/// (earliest wins ties).
pub fn grid_search(train: &Dataset, grid: &[SearchConfig]) -> Result<(SearchConfig, SearchNode)> {
    let mut best: Option<(usize, SearchNode)> = None;
    for (i, cfg) in grid.iter().enumerate() {
        let node = run(train, cfg)?;
        if best.as_ref().is_none_or(|(_, b)| node.score() > b.score()) {
            best = Some((i, node));
        }
    }
    let (i, node) = best.ok_or_else(|| Error::InvalidArgument("empty configuration grid".into()))?;
    Ok((grid[i].clone(), node))
}
