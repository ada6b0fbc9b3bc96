#![allow(dead_code)]

use symtree::search::{ExpansionRecord, Trace};
use symtree::{Dataset, Term};

/// Small LCG so test inputs do not depend on the crate's own generator.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() * n as f64) as usize
    }
}

/// Solves `a x = b` (row-major square `a`) by Gaussian elimination with full
/// pivoting.
pub fn solve_full_pivot(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    let mut col_of: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, -1.0);
        for (r, row) in a.iter().enumerate().skip(k) {
            for (c, v) in row.iter().enumerate().skip(k) {
                if v.abs() > best {
                    best = v.abs();
                    pr = r;
                    pc = c;
                }
            }
        }
        a.swap(k, pr);
        b.swap(k, pr);
        for row in a.iter_mut() {
            row.swap(k, pc);
        }
        col_of.swap(k, pc);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *dst -= f * src;
            }
            b[r] -= f * b[k];
        }
    }
    let mut z = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * z[c]).sum();
        z[k] = (b[k] - s) / a[k][k];
    }
    let mut x = vec![0.0; n];
    for (k, &c) in col_of.iter().enumerate() {
        x[c] = z[k];
    }
    x
}

/// Normal-equations least squares over explicit columns plus an intercept.
/// Returns `(weights, intercept)`.
pub fn normal_equations(columns: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let mut cols: Vec<Vec<f64>> = columns.to_vec();
    cols.push(vec![1.0; y.len()]);
    let p = cols.len();
    let gram: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| dot(&cols[i], &cols[j])).collect())
        .collect();
    let rhs: Vec<f64> = cols.iter().map(|c| dot(c, y)).collect();
    let mut sol = solve_full_pivot(gram, rhs);
    let intercept = sol.pop().unwrap();
    (sol, intercept)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn column(term: &Term, data: &Dataset) -> Vec<f64> {
    data.rows().map(|r| term.eval(r).unwrap()).collect()
}

pub fn grid_1d(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Dataset {
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let ys = xs.iter().map(|&x| f(x)).collect();
    Dataset::new(xs, ys, 1).unwrap()
}

pub fn sorted_keys(terms: &[Term]) -> Vec<String> {
    let mut v: Vec<String> = terms.iter().map(|t| format!("{:?}", (t.exponents(), t.transform()))).collect();
    v.sort();
    v
}

/// Checks one expansion record: children never score below the parent, and
/// the pre-simplification accepted sets partition the filtered candidates.
pub fn check_expansion(rec: &ExpansionRecord) -> Result<(), String> {
    for s in &rec.child_scores {
        if *s < rec.parent_score {
            return Err(format!("child score {s} below parent {}", rec.parent_score));
        }
    }
    let accepted: Vec<Term> = rec.accepted.iter().flatten().cloned().collect();
    if sorted_keys(&accepted) != sorted_keys(&rec.filtered) {
        return Err(format!(
            "accepted {} terms across {} children but {} were filtered",
            accepted.len(),
            rec.accepted.len(),
            rec.filtered.len()
        ));
    }
    if rec.returned_parent != rec.filtered.is_empty() {
        return Err("returned the parent although candidates survived".into());
    }
    Ok(())
}

pub fn check_trace(trace: &Trace) -> Result<(), String> {
    for rec in &trace.expansions {
        check_expansion(rec)?;
    }
    for w in trace.best_per_iteration.windows(2) {
        if w[1] < w[0] {
            return Err(format!("best score fell from {} to {}", w[0], w[1]));
        }
    }
    Ok(())
}
