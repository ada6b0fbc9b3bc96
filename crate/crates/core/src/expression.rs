use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::Term;
use crate::transform::TransformId;

/// A fitted interaction-transformation model:
/// `intercept + sum_i weight_i * term_i(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    terms: Vec<Term>,
    weights: Vec<f64>,
    intercept: f64,
    dim: usize,
}

impl Expression {
    /// Builds an expression, validating dimensions, finiteness, and that no
    /// two terms share a canonical key.
    pub fn new(terms: Vec<Term>, weights: Vec<f64>, intercept: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if terms.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} terms but {} weights",
                terms.len(),
                weights.len()
            )));
        }
        if let Some(t) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::InvalidArgument(format!(
                "term {t} has dimension {}, expression has {dim}",
                t.dim()
            )));
        }
        if !intercept.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NumericFailure);
        }
        let mut seen = HashSet::with_capacity(terms.len());
        if let Some(dup) = terms.iter().find(|t| !seen.insert(*t)) {
            return Err(Error::InvalidArgument(format!("duplicate term {dup}")));
        }
        Ok(Expression {
            terms,
            weights,
            intercept,
            dim,
        })
    }

    /// The constant model.
    pub fn constant(intercept: f64, dim: usize) -> Result<Self> {
        Expression::new(Vec::new(), Vec::new(), intercept, dim)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .zip(&self.weights)
            .fold(self.intercept, |acc, (t, w)| acc + w * t.eval_unchecked(x))
    }

    /// Evaluates while counting primitive operations: one power per
    /// coordinate, one transform, and one weight multiply for every term.
    pub fn eval_counted(&self, x: &[f64]) -> Result<(f64, usize)> {
        self.check_dim(x)?;
        let mut ops = 0;
        let mut acc = self.intercept;
        for (t, w) in self.terms.iter().zip(&self.weights) {
            let mut product = 1.0;
            for (&k, &xi) in t.exponents().iter().zip(x) {
                product *= crate::term::int_pow(xi, k);
                ops += 1;
            }
            let g = t.transform().apply(product);
            ops += 1;
            acc += w * g;
            ops += 1;
        }
        Ok((acc, ops))
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, expression expects {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Node count of the canonical expression tree.
    ///
    /// The tree is a chain of additions over the intercept leaf (omitted when
    /// the intercept is zero) and one subtree per term. A term subtree is
    /// `weight * [transform](monomial)`; the monomial multiplies one factor per
    /// nonzero exponent, where a factor is a variable leaf, wrapped in a
    /// `pow` node with an exponent leaf unless the exponent is +1 or -1. An
    /// all-zero monomial is a single constant leaf.
    pub fn size(&self) -> usize {
        let summands = self.terms.len() + usize::from(self.intercept != 0.0);
        if summands == 0 {
            return 1;
        }
        let additions = summands - 1;
        let intercept_leaf = usize::from(self.intercept != 0.0);
        let term_nodes: usize = self.terms.iter().map(term_size).sum();
        additions + intercept_leaf + term_nodes
    }

    /// Human-readable infix form; weights use six significant digits.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (t, &w)) in self.terms.iter().zip(&self.weights).enumerate() {
            push_signed(&mut out, i == 0, w);
            out.push('*');
            out.push_str(&t.to_string());
        }
        if self.terms.is_empty() {
            out.push_str(&format_sig6(self.intercept));
        } else if self.intercept != 0.0 {
            push_signed(&mut out, false, self.intercept);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ExpressionDoc::from(self)).expect("expression serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ExpressionDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("model json: {e}")))?;
        doc.try_into()
    }
}

fn term_size(t: &Term) -> usize {
    let transform_node = usize::from(!t.transform().is_identity());
    let factors: Vec<i32> = t.exponents().iter().copied().filter(|&k| k != 0).collect();
    let monomial = if factors.is_empty() {
        1
    } else {
        let leaves: usize = factors
            .iter()
            .map(|k| if k.abs() == 1 { 1 } else { 3 })
            .sum();
        leaves + factors.len() - 1
    };
    // weight leaf + multiply node
    2 + transform_node + monomial
}

fn push_signed(out: &mut String, first: bool, v: f64) {
    if first {
        out.push_str(&format_sig6(v));
    } else if v < 0.0 {
        out.push_str(" - ");
        out.push_str(&format_sig6(-v));
    } else {
        out.push_str(" + ");
        out.push_str(&format_sig6(v));
    }
}

/// Six significant digits with trailing zeros kept, in the style of `%#.6g`.
pub fn format_sig6(v: f64) -> String {
    const SIG: i32 = 6;
    if v == 0.0 {
        return "0.00000".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG).contains(&exp) {
        format!("{:.*}", (SIG - 1 - exp) as usize, v)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exponents: Vec<i32>,
    transform: TransformId,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct ExpressionDoc {
    dim: usize,
    intercept: f64,
    terms: Vec<TermDoc>,
}

impl From<&Expression> for ExpressionDoc {
    fn from(e: &Expression) -> Self {
        ExpressionDoc {
            dim: e.dim,
            intercept: e.intercept,
            terms: e
                .terms
                .iter()
                .zip(&e.weights)
                .map(|(t, &weight)| TermDoc {
                    exponents: t.exponents().to_vec(),
                    transform: t.transform(),
                    weight,
                })
                .collect(),
        }
    }
}

impl TryFrom<ExpressionDoc> for Expression {
    type Error = Error;

    fn try_from(doc: ExpressionDoc) -> Result<Self> {
        let mut terms = Vec::with_capacity(doc.terms.len());
        let mut weights = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            terms.push(Term::new(t.exponents, t.transform)?);
            weights.push(t.weight);
        }
        Expression::new(terms, weights, doc.intercept, doc.dim)
    }
}

impl Serialize for Expression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpressionDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ExpressionDoc::deserialize(d)?;
        Expression::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::term::make_linear_terms;

    fn t(exponents: &[i32], tr: TransformId) -> Term {
        Term::new(exponents.to_vec(), tr).unwrap()
    }

    #[test]
    fn eval_examples() {
        let lin = Expression::new(make_linear_terms(3).unwrap(), vec![1.0, 2.0, 3.0], 0.0, 3).unwrap();
        assert_eq!(lin.eval(&[1.0, 1.0, 1.0]).unwrap(), 6.0);

        let sq = Expression::new(vec![t(&[2, 0, 0], TransformId::Identity)], vec![3.0], 0.0, 3).unwrap();
        assert_eq!(sq.eval(&[2.0, -7.0, 11.0]).unwrap(), 12.0);

        let c = Expression::constant(4.25, 2).unwrap();
        assert_eq!(c.eval(&[1.0, 2.0]).unwrap(), 4.25);
        assert_eq!(c.eval(&[-1e9, 0.0]).unwrap(), 4.25);

        assert!(matches!(c.eval(&[1.0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn non_finite_terms_propagate() {
        let e = Expression::new(vec![t(&[0, -1], TransformId::Identity)], vec![1.0], 0.0, 2).unwrap();
        assert!(!e.eval(&[1.0, 0.0]).unwrap().is_finite());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let x = t(&[1], TransformId::Identity);
        assert!(Expression::new(vec![x.clone(), x.clone()], vec![1.0, 1.0], 0.0, 1).is_err());
        assert!(Expression::new(vec![x.clone()], vec![], 0.0, 1).is_err());
        assert!(Expression::new(vec![x.clone()], vec![f64::NAN], 0.0, 1).is_err());
        assert!(Expression::new(vec![x], vec![1.0], 0.0, 2).is_err());
    }

    #[test]
    fn size_examples() {
        let lin = Expression::new(make_linear_terms(3).unwrap(), vec![1.0, 2.0, 3.0], 0.5, 3).unwrap();
        assert_eq!(lin.size(), 13);
        let one = Expression::new(vec![t(&[1], TransformId::Identity)], vec![1.0], 0.0, 1).unwrap();
        assert_eq!(one.size(), 3);
        let sin = Expression::new(vec![t(&[2], TransformId::Sin)], vec![1.0], 0.0, 1).unwrap();
        assert_eq!(sin.size(), 6);
        assert_eq!(Expression::constant(0.0, 1).unwrap().size(), 1);
        assert_eq!(Expression::constant(2.0, 1).unwrap().size(), 1);
        // x0^2 * x1^-1: (pow, x0, 2) * x1 under weight multiply
        let mixed = Expression::new(vec![t(&[2, -1], TransformId::Identity)], vec![1.0], 0.0, 2).unwrap();
        assert_eq!(mixed.size(), 2 + 3 + 1 + 1);
    }

    #[test]
    fn eval_cost_is_terms_times_d_plus_two() {
        for (n_terms, d) in [(1usize, 1usize), (10, 3), (100, 5)] {
            let terms: Vec<Term> = (0..n_terms)
                .map(|i| {
                    let mut e = vec![0; d];
                    e[i % d] = (i / d + 1) as i32;
                    Term::monomial(e).unwrap()
                })
                .collect();
            let e = Expression::new(terms, vec![0.5; n_terms], 1.0, d).unwrap();
            let x = vec![1.01; d];
            let (v, ops) = e.eval_counted(&x).unwrap();
            assert_eq!(ops, n_terms * (d + 2));
            assert_eq!(v, e.eval(&x).unwrap());
        }
    }

    #[test]
    fn render_examples() {
        let e = Expression::new(
            vec![t(&[1, 0], TransformId::Identity), t(&[0, 2], TransformId::Sin)],
            vec![0.3, 0.6],
            0.0,
            2,
        )
        .unwrap();
        assert_eq!(e.render(), "0.300000*x0 + 0.600000*sin(x1^2)");
        assert_eq!(Expression::constant(1.5, 1).unwrap().render(), "1.50000");
        let inv = Expression::new(vec![t(&[1, -1], TransformId::Identity)], vec![1.0], 0.0, 2).unwrap();
        assert!(inv.render().contains("x0*x1^-1"));
        let neg = Expression::new(vec![t(&[1], TransformId::Identity)], vec![-2.0], -3.0, 1).unwrap();
        assert_eq!(neg.render(), "-2.00000*x0 - 3.00000");
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.3), "0.300000");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.0001), "0.000100000");
        assert_eq!(format_sig6(0.00001234), "1.23400e-05");
        assert_eq!(format_sig6(-5.0), "-5.00000");
    }

    #[test]
    fn json_contract() {
        let e = Expression::new(vec![t(&[2, -1], TransformId::SqrtAbs)], vec![1.25], -0.5, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["intercept"], -0.5);
        assert_eq!(v["terms"][0]["exponents"], serde_json::json!([2, -1]));
        assert_eq!(v["terms"][0]["transform"], "sqrtabs");
        assert_eq!(v["terms"][0]["weight"], 1.25);
        assert_eq!(Expression::from_json(&e.to_json()).unwrap(), e);
        assert!(Expression::from_json(r#"{"dim":1,"intercept":0,"terms":[{"exponents":[1],"transform":"exp","weight":1}]}"#).is_err());
    }

    fn arb_expression() -> impl Strategy<Value = Expression> {
        let term = (prop::collection::vec(-3i32..=3, 2), 0usize..7);
        (prop::collection::vec((term, -5.0f64..5.0), 0..6), -2.0f64..2.0).prop_map(|(raw, b)| {
            let mut seen = HashSet::new();
            let (terms, weights): (Vec<_>, Vec<_>) = raw
                .into_iter()
                .map(|((e, ti), w)| (Term::new(e, TransformId::ALL[ti]).unwrap(), w))
                .filter(|(t, _)| seen.insert(t.clone()))
                .unzip();
            Expression::new(terms, weights, b, 2).unwrap()
        })
    }

    proptest! {
        #[test]
        fn size_ignores_term_order(e in arb_expression(), rot in 0usize..6) {
            let mut pairs: Vec<_> = e.terms().iter().cloned().zip(e.weights().iter().copied()).collect();
            if !pairs.is_empty() {
                let r = rot % pairs.len();
                pairs.rotate_left(r);
                pairs.reverse();
            }
            let (terms, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            let shuffled = Expression::new(terms, weights, e.intercept(), 2).unwrap();
            prop_assert_eq!(shuffled.size(), e.size());
            prop_assert!(e.size() >= 1);
        }

        #[test]
        fn finite_terms_give_finite_output(e in arb_expression(), x0 in 0.5f64..3.0, x1 in 0.5f64..3.0) {
            let x = [x0, x1];
            if e.terms().iter().all(|t| t.eval(&x).unwrap().is_finite()) {
                prop_assert!(e.eval(&x).unwrap().is_finite());
            }
        }

        #[test]
        fn json_round_trip(e in arb_expression()) {
            prop_assert_eq!(Expression::from_json(&e.to_json()).unwrap(), e);
        }
    }
}
