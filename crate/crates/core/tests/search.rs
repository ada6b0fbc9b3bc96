mod common;

use common::{check_expansion, check_trace, grid_1d, sorted_keys, Lcg};
use proptest::prelude::*;
use symtree::search::{
    expand, filter_candidates, greedy_search, interaction, inverse_interaction, run_traced, simplify,
    transformation,
};
use symtree::{grid_search, make_linear_terms, mae, run, Dataset, SearchConfig, SearchNode, Term, TransformId};

fn mono(k: &[i32]) -> Term {
    Term::monomial(k.to_vec()).unwrap()
}

fn with(k: &[i32], t: TransformId) -> Term {
    Term::new(k.to_vec(), t).unwrap()
}

fn exps(terms: &[Term]) -> Vec<Vec<i32>> {
    terms.iter().map(|t| t.exponents().to_vec()).collect()
}

#[test]
fn worked_example_operator_counts() {
    let root = make_linear_terms(3).unwrap();
    let inter = interaction(&root);
    assert_eq!(
        exps(&inter),
        [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
    );
    let inv = inverse_interaction(&root);
    assert_eq!(inv.len(), 6);
    assert!(inv.contains(&mono(&[1, -1, 0])));
    assert!(inv.contains(&mono(&[-1, 1, 0])));
    let tr = transformation(&root, &[TransformId::Sin, TransformId::Log]);
    assert_eq!(tr.len(), 6);
    assert_eq!(tr[0], with(&[1, 0, 0], TransformId::Sin));
    assert_eq!(tr[1], with(&[1, 0, 0], TransformId::Log));
}

#[test]
fn operator_small_cases() {
    assert_eq!(interaction(&[mono(&[1])]), [mono(&[2])]);
    assert_eq!(
        interaction(&[mono(&[1, 0]), mono(&[0, 1])]),
        [mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]
    );
    assert!(inverse_interaction(&[mono(&[1])]).is_empty());
    assert_eq!(
        inverse_interaction(&[mono(&[2, 0]), mono(&[1, 0])]),
        [mono(&[1, 0]), mono(&[-1, 0])]
    );
    assert!(transformation(&[with(&[1], TransformId::Sin)], &[TransformId::Sin]).is_empty());
    assert_eq!(
        transformation(&[mono(&[2, 1])], &[TransformId::Cos]),
        [with(&[2, 1], TransformId::Cos)]
    );
}

#[test]
fn filter_rules() {
    // x1 <= 0 rows make log(x1) indeterminate
    let rows = vec![vec![1.0, -1.0], vec![2.0, 0.5], vec![3.0, 2.0], vec![4.0, 1.0]];
    let y = rows.iter().map(|r| r[0] * r[0] + r[1]).collect();
    let data = Dataset::from_rows(&rows, y).unwrap();
    let node = SearchNode::fit(&make_linear_terms(2).unwrap(), &data).unwrap();
    let log_x1 = with(&[0, 1], TransformId::Log);
    assert!(filter_candidates(&node, &[log_x1], &data).is_empty());
    assert!(filter_candidates(&node, &[mono(&[1, 0])], &data).is_empty());

    let sq = grid_1d(-2.0, 2.0, 21, |x| x * x);
    let node = SearchNode::fit(&[mono(&[1])], &sq).unwrap();
    let kept = filter_candidates(&node, &[mono(&[2]), mono(&[2])], &sq);
    assert_eq!(kept, [mono(&[2])]);
}

#[test]
fn greedy_examples() {
    let sq = grid_1d(-2.0, 2.0, 41, |x| x * x);
    let node = SearchNode::fit(&[mono(&[1])], &sq).unwrap();
    let (same, unused) = greedy_search(&node, &[], &sq);
    assert_eq!(same.terms(), node.terms());
    assert!(unused.is_empty());

    let (child, unused) = greedy_search(&node, &[mono(&[2])], &sq);
    assert!(child.terms().contains(&mono(&[2])));
    assert!(unused.is_empty());
    let test = grid_1d(-1.9, 1.9, 17, |x| x * x);
    assert!(mae(child.expression(), &test).unwrap() < 1e-8);

    let cubic = grid_1d(-2.0, 2.0, 41, |x| x * x + x * x * x);
    let node = SearchNode::fit(&[mono(&[1])], &cubic).unwrap();
    let (child, unused) = greedy_search(&node, &[mono(&[2]), mono(&[2]), mono(&[3])], &cubic);
    assert_eq!(unused, [mono(&[2])]);
    assert_eq!(sorted_keys(child.terms()), sorted_keys(&[mono(&[1]), mono(&[2]), mono(&[3])]));
}

#[test]
fn expand_returns_node_when_nothing_survives() {
    let line = grid_1d(-1.0, 1.0, 11, |x| 2.0 * x + 1.0);
    let node = SearchNode::fit(&[mono(&[1])], &line).unwrap();
    let cfg = SearchConfig::default();
    let children = expand(&node, &cfg, &line, 1);
    assert_eq!(children.len(), 1);
    assert_eq!(children[0].terms(), node.terms());
}

#[test]
fn expand_two_children_cover_candidates() {
    // three points: x^2 and sin(x) each give an exact fit on their own, so
    // once x^2 is in, sin(x) cannot improve and starts the second child
    let rows = [0.5, 1.0, 2.0];
    let y: Vec<f64> = rows.iter().map(|x: &f64| x * x + x.sin()).collect();
    let data = Dataset::new(rows.to_vec(), y, 1).unwrap();
    let node = SearchNode::fit(&[mono(&[1])], &data).unwrap();
    let cfg = SearchConfig {
        min_i: 5,
        min_t: 0,
        transforms: vec![TransformId::Sin],
        ..SearchConfig::default()
    };
    let children = expand(&node, &cfg, &data, 1);
    assert_eq!(children.len(), 2);
    assert!(children[0].terms().contains(&mono(&[2])));
    assert!(children[1].terms().contains(&with(&[1], TransformId::Sin)));
    for c in &children {
        assert!(c.score() >= node.score());
    }

    let (_, trace) = run_traced(&data, &SearchConfig { extra_iters: 0, ..cfg }).unwrap();
    let first = &trace.expansions[0];
    assert_eq!(first.accepted, [vec![mono(&[2])], vec![with(&[1], TransformId::Sin)]]);
    check_expansion(first).unwrap();
}

#[test]
fn simplify_examples() {
    let data = grid_1d(-2.0, 2.0, 31, |x| 5.0 * x + 1e-9 * x * x * x);
    let node = SearchNode::fit(&[mono(&[1]), mono(&[3])], &data).unwrap();
    assert!((node.expression().weights()[0] - 5.0).abs() < 1e-9);
    assert!((node.expression().weights()[1] - 1e-9).abs() < 1e-12);
    let s = simplify(&node, 1e-6, &data);
    assert_eq!(s.terms(), [mono(&[1])]);
    assert!((s.expression().weights()[0] - 5.0).abs() < 1e-8);

    let kept = simplify(&node, 1e-10, &data);
    assert_eq!(kept.expression(), node.expression());
}

#[test]
fn run_examples() {
    let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 6) as f64 - 2.5, (i / 6) as f64 * 0.7 - 1.0]).collect();
    let y = rows.iter().map(|r| 2.0 * r[0] - r[1] + 1.0).collect();
    let data = Dataset::from_rows(&rows, y).unwrap();
    let best = run(&data, &SearchConfig::default()).unwrap();
    assert_eq!(best.terms(), make_linear_terms(2).unwrap());
    assert!((best.score() - 1.0).abs() < 1e-12);
    let e = best.expression();
    assert!((e.weights()[0] - 2.0).abs() < 1e-12);
    assert!((e.weights()[1] + 1.0).abs() < 1e-12);
    assert!((e.intercept() - 1.0).abs() < 1e-12);

    let wavy = grid_1d(-3.0, 3.0, 40, |x| x.sin() + x * x);
    let zero = SearchConfig {
        min_i: 0,
        min_t: 0,
        extra_iters: 0,
        ..SearchConfig::default()
    };
    let root = run(&wavy, &zero).unwrap();
    assert_eq!(root.terms(), [mono(&[1])]);
}

#[test]
fn run_recovers_cubic() {
    let mut rng = Lcg::new(3);
    let xs: Vec<f64> = (0..300).map(|_| rng.range(-5.0, 5.0)).collect();
    let ys = xs.iter().map(|x| x.powi(3) + x.powi(2) + 5.0 * x).collect();
    let data = Dataset::new(xs, ys, 1).unwrap();
    let best = run(&data, &SearchConfig::default()).unwrap();
    assert_eq!(sorted_keys(best.terms()), sorted_keys(&[mono(&[1]), mono(&[2]), mono(&[3])]));
    let e = best.expression();
    for (t, w) in e.terms().iter().zip(e.weights()) {
        let want = if t.exponents()[0] == 1 { 5.0 } else { 1.0 };
        assert!((w - want).abs() < 1e-8);
    }
}

#[test]
fn grid_search_picks_best_and_earliest() {
    let data = grid_1d(0.1, 3.0, 40, |x| x.ln() + x);
    let weak = SearchConfig {
        min_i: 0,
        min_t: 0,
        extra_iters: 0,
        ..SearchConfig::default()
    };
    let strong = SearchConfig {
        min_i: 1,
        min_t: 1,
        extra_iters: 1,
        ..SearchConfig::default()
    };
    let (cfg, node) = grid_search(&data, std::slice::from_ref(&weak)).unwrap();
    assert_eq!(cfg, weak);
    assert_eq!(node.terms(), [mono(&[1])]);

    let (cfg, node) = grid_search(&data, &[weak.clone(), strong.clone(), strong.clone()]).unwrap();
    assert_eq!(cfg, strong);
    assert!(node.fit.train_mae < 1e-12);
    assert!(grid_search(&data, &[]).is_err());
}

fn random_dataset(seed: u64, d: usize, n: usize) -> Dataset {
    let mut rng = Lcg::new(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.range(0.2, 3.0)).collect()).collect();
    let kind = rng.below(3);
    let y = rows
        .iter()
        .map(|r| match kind {
            0 => r[0] * r[0] - r[d - 1].sqrt(),
            1 => (r[0] * r[d - 1]).sin() + 2.0,
            _ => 1.0 / (1.0 + r.iter().sum::<f64>()),
        })
        .collect();
    Dataset::from_rows(&rows, y).unwrap()
}

fn small_config(tau_exp: i32, min_i: usize, min_t: usize, extra: usize, capped: bool) -> SearchConfig {
    let cfg = SearchConfig {
        tau: 10f64.powi(-tau_exp),
        min_i,
        min_t,
        extra_iters: extra,
        ..SearchConfig::default()
    };
    if capped {
        cfg.with_caps(Some(6), Some(4))
    } else {
        cfg
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operator_counts(
        raw in prop::collection::vec(prop::collection::vec(-3i32..=3, 2), 1..6),
        n_tr in 1usize..=6,
    ) {
        let mut terms: Vec<Term> = Vec::new();
        for e in raw {
            let t = Term::monomial(e).unwrap();
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        let n = terms.len();
        prop_assert_eq!(interaction(&terms).len(), n * (n + 1) / 2);
        prop_assert_eq!(inverse_interaction(&terms).len(), n * (n - 1));
        let set: Vec<TransformId> = TransformId::default_set().into_iter().take(n_tr).collect();
        prop_assert_eq!(transformation(&terms, &set).len(), n * n_tr);
    }

    #[test]
    fn search_invariants(
        seed in any::<u64>(),
        d in 1usize..=2,
        tau_exp in 2i32..=6,
        min_i in 0usize..=2,
        min_t in 0usize..=2,
        extra in 0usize..=1,
        capped in any::<bool>(),
    ) {
        let data = random_dataset(seed, d, 24);
        let cfg = small_config(tau_exp, min_i, min_t, extra, capped || d == 2);
        let (best, trace) = run_traced(&data, &cfg).unwrap();
        check_trace(&trace).map_err(TestCaseError::fail)?;
        for rec in &trace.expansions {
            let n = rec.parent_terms.len();
            prop_assert_eq!(rec.n_interaction, n * (n + 1) / 2);
            let inv = if rec.iteration > cfg.min_i { n * (n - 1) } else { 0 };
            prop_assert_eq!(rec.n_inverse, inv);
            if rec.iteration <= cfg.min_t {
                prop_assert_eq!(rec.n_transformation, 0);
            } else {
                prop_assert!(rec.n_transformation <= n * cfg.transforms.len());
            }
            if !rec.accepted.is_empty() {
                prop_assert!(rec.child_scores.iter().all(|s| *s >= rec.parent_score));
            }
        }
        let last = *trace.best_per_iteration.last().unwrap();
        prop_assert_eq!(best.score(), last);
        let again = run(&data, &cfg).unwrap();
        prop_assert_eq!(again.expression(), best.expression());
    }

    #[test]
    fn greedy_keeps_child_and_unused_disjoint(seed in any::<u64>()) {
        let data = random_dataset(seed, 1, 20);
        let node = SearchNode::fit(&[mono(&[1])], &data).unwrap();
        let mut cands = interaction(&[mono(&[1]), mono(&[-1]), mono(&[2])]);
        cands.extend(transformation(&[mono(&[1])], &TransformId::default_set()));
        let kept = filter_candidates(&node, &cands, &data);
        let (child, unused) = greedy_search(&node, &kept, &data);
        for t in &unused {
            prop_assert!(!child.terms().contains(t));
        }
        if !kept.is_empty() {
            prop_assert!(child.score() > node.score());
        }
    }

    #[test]
    fn dropping_negligible_term_barely_moves_mae(
        a in -5.0f64..5.0,
        eps_exp in 8i32..=12,
        seed in any::<u64>(),
    ) {
        let tau = 1e-6;
        let eps = 10f64.powi(-eps_exp);
        let mut rng = Lcg::new(seed);
        let xs: Vec<f64> = (0..30).map(|_| rng.range(-2.0, 2.0)).collect();
        let ys = xs.iter().map(|x| a * x + eps * x.cos()).collect();
        let data = Dataset::new(xs.clone(), ys, 1).unwrap();
        let cos = with(&[1], TransformId::Cos);
        let node = SearchNode::fit(&[mono(&[1]), cos.clone()], &data).unwrap();
        let s = simplify(&node, tau, &data);
        prop_assert_eq!(s.terms(), [mono(&[1])]);
        let max_term = xs.iter().map(|x| x.cos().abs()).fold(0.0, f64::max);
        prop_assert!((s.fit.train_mae - node.fit.train_mae).abs() < 10.0 * tau * max_term);
    }
}
