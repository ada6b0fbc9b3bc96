use std::collections::{BTreeMap, HashSet};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::expression::Expression;
use crate::rng::SampleRng;
use crate::term::Term;

/// Default absolute tolerance for [`recovered`].
pub const DEFAULT_COEFF_TOL: f64 = 1e-4;

/// Parameters of one random polynomial instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolySpec {
    pub dim: usize,
    pub order: u32,
    pub n_base_terms: usize,
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
}

impl PolySpec {
    pub fn new(dim: usize, order: u32, n_base_terms: usize, seed: u64) -> Self {
        PolySpec {
            dim,
            order,
            n_base_terms,
            seed,
            n_train: 2500,
            n_test: 1500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("dimension {} outside 1..=3", self.dim)));
        }
        if !(1..=4).contains(&self.order) {
            return Err(Error::InvalidArgument(format!("order {} outside 1..=4", self.order)));
        }
        if !(1..=4).contains(&self.n_base_terms) {
            return Err(Error::InvalidArgument(format!(
                "base term count {} outside 1..=4",
                self.n_base_terms
            )));
        }
        let available = monomials(self.dim, self.order).len();
        if self.n_base_terms > available {
            return Err(Error::InvalidArgument(format!(
                "only {available} distinct monomials of degree 1..={} in {} variables",
                self.order, self.dim
            )));
        }
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::EmptyData);
        }
        Ok(())
    }
}

/// Every non-negative exponent vector of total degree `1..=order`, sorted by
/// degree then lexicographically.
fn monomials(dim: usize, order: u32) -> Vec<Vec<i32>> {
    let mut by_degree: BTreeMap<u32, Vec<Vec<i32>>> = BTreeMap::new();
    let mut current = vec![0i32; dim];
    fn rec(i: usize, left: u32, current: &mut Vec<i32>, out: &mut BTreeMap<u32, Vec<Vec<i32>>>, order: u32) {
        if i == current.len() {
            let degree = order - left;
            if degree > 0 {
                out.entry(degree).or_default().push(current.clone());
            }
            return;
        }
        for k in 0..=left {
            current[i] = k as i32;
            rec(i + 1, left - k, current, out, order);
        }
        current[i] = 0;
    }
    rec(0, order, &mut current, &mut by_degree, order);
    by_degree
        .into_values()
        .flat_map(|mut v| {
            v.sort();
            v
        })
        .collect()
}

/// Generates a random polynomial target and its datasets.
///
/// One term of total degree exactly `order` is drawn first, then the
/// remaining `n_base_terms - 1` distinct terms come from all monomials of
/// degree `1..=order`. Coefficients are uniform on `[-5, -0.5] U [0.5, 5]`
/// and the intercept is zero. Inputs are uniform on `[0, 1)^dim`; training
/// rows are drawn before test rows from the same seeded stream.
pub fn random_polynomial(spec: &PolySpec) -> Result<(Expression, Dataset, Dataset)> {
    spec.validate()?;
    let mut rng = SampleRng::new(spec.seed);
    let pool = monomials(spec.dim, spec.order);
    let top: Vec<usize> = (0..pool.len())
        .filter(|&i| pool[i].iter().sum::<i32>() == spec.order as i32)
        .collect();

    let mut chosen = vec![top[rng.below(top.len())]];
    let mut used: HashSet<usize> = chosen.iter().copied().collect();
    while chosen.len() < spec.n_base_terms {
        let rest: Vec<usize> = (0..pool.len()).filter(|i| !used.contains(i)).collect();
        let pick = rest[rng.below(rest.len())];
        used.insert(pick);
        chosen.push(pick);
    }

    let terms = chosen
        .iter()
        .map(|&i| Term::monomial(pool[i].clone()))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = (0..terms.len())
        .map(|_| {
            let magnitude = rng.uniform(0.5, 5.0);
            if rng.next_u64() & 1 == 1 {
                -magnitude
            } else {
                magnitude
            }
        })
        .collect();
    let target = Expression::new(terms, weights, 0.0, spec.dim)?;

    let mut draw = |n: usize| -> Result<Dataset> {
        let x: Vec<f64> = (0..n * spec.dim).map(|_| rng.unit()).collect();
        let y = x
            .chunks_exact(spec.dim)
            .map(|row| target.eval(row))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(x, y, spec.dim)
    };
    let train = draw(spec.n_train)?;
    let test = draw(spec.n_test)?;
    Ok((target, train, test))
}

/// Exact structural recovery: after discarding found terms with
/// `|weight| < coeff_tol`, the term sets must match and every weight and the
/// intercept must agree within `coeff_tol`.
pub fn recovered(found: &Expression, target: &Expression, coeff_tol: f64) -> bool {
    if found.dim() != target.dim() {
        return false;
    }
    let kept: Vec<(&Term, f64)> = found
        .terms()
        .iter()
        .zip(found.weights().iter().copied())
        .filter(|(_, w)| w.abs() >= coeff_tol)
        .collect();
    if kept.len() != target.len() {
        return false;
    }
    let wanted: BTreeMap<&Term, f64> = target.terms().iter().zip(target.weights().iter().copied()).collect();
    let weights_match = kept.iter().all(|(t, w)| {
        wanted
            .get(t)
            .is_some_and(|tw| (w - tw).abs() <= coeff_tol)
    });
    weights_match && (found.intercept() - target.intercept()).abs() < coeff_tol
}
