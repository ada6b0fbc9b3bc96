//! Direct use of the fitting layer: build a design matrix from hand-picked
//! terms, solve it, and look at rank-deficient behaviour.
//!
//! ```text
//! cargo run --example least_squares
//! ```

use symtree::fit::{design_matrix, fit, fit_design, score};
use symtree::{Dataset, Term, TransformId};

fn main() -> symtree::Result<()> {
    let xs: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x.ln() - 0.5 * x * x + 1.0).collect();
    let data = Dataset::new(xs, ys, 1)?;

    let terms = vec![Term::new(vec![1], TransformId::Log)?, Term::monomial(vec![2])?];
    let result = fit(&terms, &data)?;
    println!("fit: {}  (rank {}, MAE {:.1e})", result.expression, result.rank, result.train_mae);
    println!("score: {}", score(&result.expression, &data)?);

    // The same column twice: the minimum-norm solution splits the weight.
    let x = Term::monomial(vec![1])?;
    let line = Dataset::new(vec![1.0, 2.0, 3.0, 4.0], vec![3.0, 5.0, 7.0, 9.0], 1)?;
    let design = design_matrix(&[x.clone(), x], &line)?;
    let lf = fit_design(&design, line.y())?;
    println!("duplicated column: weights {:?}, intercept {:.3}, rank {}", lf.weights, lf.intercept, lf.rank);
    Ok(())
}
