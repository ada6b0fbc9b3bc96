//! Grid-search a few analytic benchmark functions on their training half and
//! report test error, in the same way as `symtree benchmark`.
//!
//! ```text
//! cargo run --release --example benchmarks -- F1 F8 F10
//! ```

use symtree::bench::{benchmark, sample, witness};
use symtree::harness::GridOptions;
use symtree::{fit::mae, grid_search};

fn main() -> symtree::Result<()> {
    let mut ids: Vec<String> = std::env::args().skip(1).collect();
    if ids.is_empty() {
        ids = vec!["F1".into(), "F9".into(), "F17".into(), "F10".into()];
    }
    let grid = GridOptions::default().grid();
    println!("{:<4} {:>12} {:>12} {:>6}  expression", "id", "train MAE", "test MAE", "size");
    for id in &ids {
        let spec = benchmark(id)?;
        let (train, test) = sample(&spec, 1)?;
        let (_, best) = grid_search(&train, &grid)?;
        let expr = best.expression();
        println!(
            "{:<4} {:>12.3e} {:>12.3e} {:>6}  {}",
            id,
            best.fit.train_mae,
            mae(expr, &test)?,
            expr.size(),
            expr
        );
        if let Some(w) = witness(id)? {
            println!("     reference {w} has test MAE {:.1e}", mae(&w, &test)?);
        }
    }
    Ok(())
}
