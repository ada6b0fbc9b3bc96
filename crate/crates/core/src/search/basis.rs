//! Incremental least squares used while scoring candidates.
//!
//! A [`Basis`] holds an orthonormal basis of the intercept column and the
//! accepted term columns, built one column at a time by Gram-Schmidt with a
//! second orthogonalization pass. Scoring one more column then costs
//! `O(n * k)` instead of a fresh `O(n * k^2)` factorization. A column whose
//! component outside the current span is below [`RANK_TOL`] of its norm is
//! dependent: it gets weight zero and cannot change the residual.
//!
//! Fitting a term list from scratch is the same sequence of appends, so an
//! incremental score and a from-scratch score of the same ordered list are
//! bit-identical.

use std::rc::Rc;

use crate::linalg::{norm2, RANK_TOL};

struct Projection {
    coeffs: Vec<f64>,
    residual: Vec<f64>,
    norm: f64,
}

#[derive(Clone)]
pub(super) struct Basis {
    n: usize,
    y: Rc<[f64]>,
    /// Original columns, intercept first.
    columns: Vec<Rc<[f64]>>,
    /// Orthonormal vectors, one per independent column.
    q: Vec<Vec<f64>>,
    /// For each column: its coefficients on `q`, and whether it was
    /// independent (added a new `q`).
    r: Vec<(Vec<f64>, bool)>,
    /// `q_i . y`
    qty: Vec<f64>,
}

impl Basis {
    /// Basis holding only the intercept column.
    pub(super) fn new(y: Rc<[f64]>) -> Self {
        let n = y.len();
        let mut b = Basis {
            n,
            y,
            columns: Vec::new(),
            q: Vec::new(),
            r: Vec::new(),
            qty: Vec::new(),
        };
        b.append(Rc::from(vec![1.0; n]));
        b
    }

    pub(super) fn rank(&self) -> usize {
        self.q.len()
    }

    fn project(&self, c: &[f64]) -> Projection {
        let mut v = c.to_vec();
        let mut coeffs = vec![0.0; self.q.len()];
        for _pass in 0..2 {
            for (qi, h) in self.q.iter().zip(coeffs.iter_mut()) {
                let d = dot(qi, &v);
                *h += d;
                for (vj, qj) in v.iter_mut().zip(qi) {
                    *vj -= d * qj;
                }
            }
        }
        let norm = norm2(&v);
        Projection {
            coeffs,
            residual: v,
            norm,
        }
    }

    fn is_independent(p: &Projection, c: &[f64]) -> bool {
        let scale = norm2(c);
        p.norm > RANK_TOL * scale && p.norm > 0.0 && p.norm.is_finite()
    }

    pub(super) fn append(&mut self, c: Rc<[f64]>) {
        let p = self.project(&c);
        let independent = Basis::is_independent(&p, &c);
        let mut coeffs = p.coeffs;
        if independent {
            let q: Vec<f64> = p.residual.iter().map(|v| v / p.norm).collect();
            self.qty.push(dot(&q, &self.y));
            self.q.push(q);
            coeffs.push(p.norm);
        }
        self.r.push((coeffs, independent));
        self.columns.push(c);
    }

    /// Intercept and term weights for the current columns, optionally with
    /// one extra column appended.
    fn solve(&self, extra: Option<(&Projection, f64)>) -> Vec<f64> {
        let ncol = self.columns.len() + usize::from(extra.is_some());
        let mut w = vec![0.0; ncol];
        // z holds q . y, reduced as weights are resolved from the back
        let mut z = self.qty.clone();
        if let Some((p, qy)) = extra {
            let wl = qy / p.norm;
            w[ncol - 1] = wl;
            for (zi, h) in z.iter_mut().zip(&p.coeffs) {
                *zi -= h * wl;
            }
        }
        let mut row = self.q.len();
        for j in (0..self.columns.len()).rev() {
            let (coeffs, independent) = &self.r[j];
            if !independent {
                continue;
            }
            row -= 1;
            let wj = z[row] / coeffs[row];
            w[j] = wj;
            for (zi, h) in z.iter_mut().zip(&coeffs[..row]) {
                *zi -= h * wj;
            }
        }
        w
    }

    fn mae(&self, w: &[f64], extra: Option<&[f64]>) -> f64 {
        let terms = &self.columns[1..];
        let total: f64 = (0..self.n)
            .map(|i| {
                let mut acc = w[0];
                for (c, wj) in terms.iter().zip(&w[1..]) {
                    acc += wj * c[i];
                }
                if let Some(e) = extra {
                    acc += w[w.len() - 1] * e[i];
                }
                (acc - self.y[i]).abs()
            })
            .sum();
        total / self.n as f64
    }

    /// Intercept, term weights, and MAE of the current fit.
    pub(super) fn fit(&self) -> (f64, Vec<f64>, f64) {
        let w = self.solve(None);
        let mae = self.mae(&w, None);
        (w[0], w[1..].to_vec(), mae)
    }

    /// MAE the fit would reach with `c` appended. Identical to appending
    /// and refitting.
    pub(super) fn mae_with(&self, c: &[f64]) -> f64 {
        let p = self.project(c);
        if !Basis::is_independent(&p, c) {
            let w = self.solve(None);
            return self.mae(&w, None);
        }
        let q: Vec<f64> = p.residual.iter().map(|v| v / p.norm).collect();
        let qy = dot(&q, &self.y);
        let w = self.solve(Some((&p, qy)));
        self.mae(&w, Some(c))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
