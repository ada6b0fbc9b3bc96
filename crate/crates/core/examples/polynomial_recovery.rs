//! Generate random polynomials on [0, 1] and check whether the search finds
//! exactly the generating terms and coefficients.
//!
//! ```text
//! cargo run --release --example polynomial_recovery
//! ```

use symtree::bench::{random_polynomial, recovered, PolySpec, DEFAULT_COEFF_TOL};
use symtree::harness::GridOptions;
use symtree::{fit::mae, grid_search};

fn main() -> symtree::Result<()> {
    let grid = GridOptions::default().grid();
    for (dim, order, base) in [(1, 2, 2), (2, 3, 2), (3, 3, 3)] {
        for seed in 0..2 {
            let (target, train, test) = random_polynomial(&PolySpec::new(dim, order, base, seed))?;
            let (_, best) = grid_search(&train, &grid)?;
            let found = best.expression();
            println!("dim {dim} order {order} base {base} seed {seed}");
            println!("  target {target}");
            println!("  found  {found}");
            println!(
                "  recovered: {}  test MAE {:.2e}",
                recovered(found, &target, DEFAULT_COEFF_TOL),
                mae(found, &test)?
            );
        }
    }
    Ok(())
}
