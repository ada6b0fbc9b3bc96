//! Candidate-term generators applied to a node's current terms.
//!
//! Generated exponent vectors that would exceed [`MAX_EXPONENT`] are
//! skipped; every other pair contributes exactly one candidate.
//!
//! [`MAX_EXPONENT`]: crate::term::MAX_EXPONENT

use crate::term::Term;
use crate::transform::TransformId;

fn combine(a: &Term, b: &Term, sign: i32) -> Option<Term> {
    let exponents = a
        .exponents()
        .iter()
        .zip(b.exponents())
        .map(|(x, y)| x + sign * y)
        .collect();
    Term::monomial(exponents).ok()
}

/// `(P_i + P_j, id)` for every unordered pair `i <= j`, self-pairs
/// included, in lexicographic `(i, j)` order.
pub fn interaction(terms: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(terms.len() * (terms.len() + 1) / 2);
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i..] {
            out.extend(combine(a, b, 1));
        }
    }
    out
}

/// `(P_i - P_j, id)` for every ordered pair `i != j`, in lexicographic
/// `(i, j)` order.
pub fn inverse_interaction(terms: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(terms.len() * terms.len().saturating_sub(1));
    for (i, a) in terms.iter().enumerate() {
        for (j, b) in terms.iter().enumerate() {
            if i != j {
                out.extend(combine(a, b, -1));
            }
        }
    }
    out
}

/// Replaces each term's transform with every function in `transforms`,
/// term-major. Outputs identical to their source are skipped.
pub fn transformation(terms: &[Term], transforms: &[TransformId]) -> Vec<Term> {
    terms
        .iter()
        .flat_map(|t| {
            transforms
                .iter()
                .filter(move |&&f| f != t.transform() && !f.is_identity())
                .map(move |&f| t.with_transform(f))
        })
        .collect()
}
