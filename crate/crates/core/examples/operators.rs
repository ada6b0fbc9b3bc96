//! The three expansion operators on a three-variable expression with terms
//! `x0^2 * x2`, `x1` and `x0 * x1^-1`.
//!
//! ```text
//! cargo run --example operators
//! ```

use symtree::search::{interaction, inverse_interaction, transformation};
use symtree::{Term, TransformId};

fn show(label: &str, terms: &[Term]) {
    println!("{label} ({}):", terms.len());
    for t in terms {
        println!("  {:<20} exponents {:?}", t.to_string(), t.exponents());
    }
}

fn main() -> symtree::Result<()> {
    let node = vec![
        Term::monomial(vec![2, 0, 1])?,
        Term::monomial(vec![0, 1, 0])?,
        Term::monomial(vec![1, -1, 0])?,
    ];
    show("node", &node);
    show("interaction", &interaction(&node));
    show("inverse interaction", &inverse_interaction(&node));
    show("transformation", &transformation(&node, &[TransformId::Sin, TransformId::Log]));
    Ok(())
}
