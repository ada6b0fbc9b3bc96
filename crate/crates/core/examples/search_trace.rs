//! Watch the search tree grow: per-iteration best score, leaf counts and the
//! candidates each expansion accepted.
//!
//! ```text
//! cargo run --example search_trace
//! ```

use symtree::search::run_traced;
use symtree::{Dataset, SearchConfig};

fn main() -> symtree::Result<()> {
    let rows: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let t = i as f64 / 59.0;
            vec![-3.0 + 6.0 * t, 0.5 + 2.0 * (1.0 - t) * t]
        })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r[0].sin() + r[0] * r[1] * r[1]).collect();
    let data = Dataset::from_rows(&rows, y)?;

    let cfg = SearchConfig {
        min_i: 1,
        min_t: 2,
        ..SearchConfig::default()
    }
    .with_caps(Some(5), Some(3));
    let (best, trace) = run_traced(&data, &cfg)?;

    for (it, (score, leaves)) in trace.best_per_iteration.iter().zip(&trace.leaves_per_iteration).enumerate() {
        println!("iteration {:>2}: best score {score:.12} over {leaves} leaves", it + 1);
    }
    for rec in trace.expansions.iter().filter(|r| !r.accepted.is_empty()).take(5) {
        println!(
            "iteration {} expanded a {}-term node: {} filtered, children {:?}",
            rec.iteration,
            rec.parent_terms.len(),
            rec.filtered.len(),
            rec.accepted.iter().map(Vec::len).collect::<Vec<_>>()
        );
    }
    println!("best: {}", best.expression());
    Ok(())
}
