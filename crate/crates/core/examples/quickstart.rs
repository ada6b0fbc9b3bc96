//! Fit `y = x^2 + x` with a single search configuration.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use symtree::{fit::mae, run, Dataset, SearchConfig};

fn main() -> symtree::Result<()> {
    let xs: Vec<f64> = (0..40).map(|i| -2.0 + 0.1 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x * x + x).collect();
    let data = Dataset::new(xs, ys, 1)?;

    let best = run(&data, &SearchConfig::default())?;
    let expr = best.expression();
    println!("model:     {expr}");
    println!("terms:     {}", expr.len());
    println!("size:      {}", expr.size());
    println!("train MAE: {:.3e}", mae(expr, &data)?);
    println!("f(3) =     {}", expr.eval(&[3.0])?);
    Ok(())
}
