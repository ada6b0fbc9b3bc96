use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::TransformId;

/// Largest absolute exponent a term may carry.
pub const MAX_EXPONENT: i32 = 64;

/// A single interaction-transformation term `t(x0^k0 * x1^k1 * ...)`.
///
/// Equality and hashing use the pair (exponents, transform), which is the
/// canonical identity of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    exponents: Vec<i32>,
    transform: TransformId,
}

impl Term {
    pub fn new(exponents: Vec<i32>, transform: TransformId) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(&k) = exponents.iter().find(|k| k.abs() > MAX_EXPONENT) {
            return Err(Error::InvalidTerm {
                exponent: k,
                bound: MAX_EXPONENT,
            });
        }
        Ok(Term {
            exponents,
            transform,
        })
    }

    /// Identity-transformed monomial.
    pub fn monomial(exponents: Vec<i32>) -> Result<Self> {
        Term::new(exponents, TransformId::Identity)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.exponents
    }

    pub fn transform(&self) -> TransformId {
        self.transform
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn with_transform(&self, transform: TransformId) -> Term {
        Term {
            exponents: self.exponents.clone(),
            transform,
        }
    }

    /// True when every exponent is zero, i.e. the monomial is the constant 1.
    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Evaluates the term at `x`, checking the dimension.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.exponents.len() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, term expects {}",
                x.len(),
                self.exponents.len()
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates without the dimension check. Domain violations produce a
    /// non-finite value.
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let product = self
            .exponents
            .iter()
            .zip(x)
            .filter(|(&k, _)| k != 0)
            .fold(1.0, |acc, (&k, &xi)| acc * int_pow(xi, k));
        if product.is_finite() {
            self.transform.apply(product)
        } else {
            f64::NAN
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monomial = render_monomial(&self.exponents);
        if self.transform.is_identity() {
            f.write_str(&monomial)
        } else {
            write!(f, "{}({})", self.transform, monomial)
        }
    }
}

pub(crate) fn render_monomial(exponents: &[i32]) -> String {
    let factors: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{k}")
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// `x^k` by exponentiation by squaring; negative `k` inverts the result.
pub fn int_pow(x: f64, k: i32) -> f64 {
    let mut base = x;
    let mut e = k.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    if k < 0 {
        1.0 / acc
    } else {
        acc
    }
}

/// One identity term per input variable: the root of the search tree.
pub fn make_linear_terms(d: usize) -> Result<Vec<Term>> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok((0..d)
        .map(|i| {
            let mut exponents = vec![0; d];
            exponents[i] = 1;
            Term {
                exponents,
                transform: TransformId::Identity,
            }
        })
        .collect())
}
