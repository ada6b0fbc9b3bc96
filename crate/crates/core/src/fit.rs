use std::collections::HashSet;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::expression::Expression;
use crate::linalg::lstsq;
use crate::term::Term;

/// Column-major `n x (m + 1)` matrix of term values; the final column is
/// the all-ones intercept column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    values: Vec<f64>,
    n: usize,
    m: usize,
    finite: bool,
}

impl DesignMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of term columns (excluding the intercept).
    pub fn n_terms(&self) -> usize {
        self.m
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.n + row]
    }
}

/// Evaluates every term over every row of `x`.
pub fn design_matrix(terms: &[Term], data: &Dataset) -> Result<DesignMatrix> {
    if let Some(t) = terms.iter().find(|t| t.dim() != data.d()) {
        return Err(Error::InvalidArgument(format!(
            "term {t} has dimension {}, data has {}",
            t.dim(),
            data.d()
        )));
    }
    let n = data.n();
    let m = terms.len();
    let mut values = Vec::with_capacity(n * (m + 1));
    for t in terms {
        values.extend(data.rows().map(|row| t.eval_unchecked(row)));
    }
    values.extend(std::iter::repeat_n(1.0, n));
    let finite = values.iter().all(|v| v.is_finite());
    Ok(DesignMatrix {
        values,
        n,
        m,
        finite,
    })
}

/// Raw least-squares coefficients for a design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub rank: usize,
}

/// Solves the least-squares problem for an already materialized design
/// matrix. Duplicate or collinear columns resolve to the minimum-norm
/// solution.
pub fn fit_design(design: &DesignMatrix, y: &[f64]) -> Result<LinearFit> {
    if design.n == 0 {
        return Err(Error::EmptyData);
    }
    if y.len() != design.n {
        return Err(Error::InvalidArgument("target length differs from row count".into()));
    }
    if !design.finite {
        return Err(Error::IndeterminateTerm);
    }
    let sol = lstsq(&design.values, y, design.n, design.m + 1);
    if sol.coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericFailure);
    }
    let mut weights = sol.coef;
    let intercept = weights.pop().expect("intercept column");
    Ok(LinearFit {
        weights,
        intercept,
        rank: sol.rank,
    })
}

/// An expression with OLS weights together with its training error.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub expression: Expression,
    pub train_mae: f64,
    pub score: f64,
    pub rank: usize,
}

impl FitResult {
    pub fn terms(&self) -> &[Term] {
        self.expression.terms()
    }
}

/// Fits weights and intercept for `terms` by ordinary least squares.
pub fn fit(terms: &[Term], data: &Dataset) -> Result<FitResult> {
    let mut seen = HashSet::with_capacity(terms.len());
    if let Some(dup) = terms.iter().find(|t| !seen.insert(*t)) {
        return Err(Error::InvalidArgument(format!("duplicate term {dup}")));
    }
    let design = design_matrix(terms, data)?;
    let lin = fit_design(&design, data.y())?;
    let columns: Vec<&[f64]> = (0..design.m).map(|j| design.column(j)).collect();
    let train_mae = mae_from_columns(&columns, &lin.weights, lin.intercept, data.y());
    let expression = Expression::new(terms.to_vec(), lin.weights, lin.intercept, data.d())?;
    Ok(FitResult {
        expression,
        train_mae,
        score: score_from_mae(train_mae),
        rank: lin.rank,
    })
}

/// MAE from precomputed term columns, summing each prediction in the same
/// order as [`Expression::eval`] so the two agree bit for bit.
pub(crate) fn mae_from_columns(columns: &[&[f64]], weights: &[f64], intercept: f64, y: &[f64]) -> f64 {
    let total: f64 = y
        .iter()
        .enumerate()
        .map(|(i, &yi)| {
            let pred = columns
                .iter()
                .zip(weights)
                .fold(intercept, |acc, (c, w)| acc + w * c[i]);
            (pred - yi).abs()
        })
        .sum();
    total / y.len() as f64
}

/// Mean absolute error of `expr` over `data`; non-finite when any
/// prediction is.
pub fn mae(expr: &Expression, data: &Dataset) -> Result<f64> {
    if expr.dim() != data.d() {
        return Err(Error::InvalidArgument(format!(
            "expression has dimension {}, data has {}",
            expr.dim(),
            data.d()
        )));
    }
    let total: f64 = data
        .rows()
        .zip(data.y())
        .map(|(row, &y)| (expr.eval_unchecked(row) - y).abs())
        .sum();
    Ok(total / data.n() as f64)
}

/// `1 / (1 + MAE)`, or 0 when the error is not finite.
pub fn score(expr: &Expression, data: &Dataset) -> Result<f64> {
    Ok(score_from_mae(mae(expr, data)?))
}

pub fn score_from_mae(mae: f64) -> f64 {
    if mae.is_finite() {
        1.0 / (1.0 + mae)
    } else {
        0.0
    }
}
