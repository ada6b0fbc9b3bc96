//! Dense least squares for the small, tall systems produced by term fitting.
//!
//! Columns are first scaled to unit Euclidean norm, then factored with
//! Householder QR and column pivoting. Diagonal entries of `R` smaller than
//! [`RANK_TOL`] times the largest one are treated as zero. A rank-deficient
//! system is resolved to the minimum-norm solution by a second QR of the
//! transpose of the leading `R` rows, rescaled to the original units.

/// Relative pivot threshold below which a column is considered dependent.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LstsqSolution {
    pub coef: Vec<f64>,
    pub rank: usize,
}

/// Solves `min ||A x - y||` for a column-major `n x p` matrix `a`.
pub fn lstsq(a: &[f64], y: &[f64], n: usize, p: usize) -> LstsqSolution {
    assert_eq!(a.len(), n * p, "matrix shape");
    assert_eq!(y.len(), n, "rhs length");
    if p == 0 {
        return LstsqSolution {
            coef: Vec::new(),
            rank: 0,
        };
    }

    let mut m = a.to_vec();
    let scale: Vec<f64> = (0..p)
        .map(|j| {
            let s = norm2(&m[j * n..(j + 1) * n]);
            if s > 0.0 && s.is_finite() {
                s
            } else {
                1.0
            }
        })
        .collect();
    for (j, s) in scale.iter().enumerate() {
        m[j * n..(j + 1) * n].iter_mut().for_each(|v| *v /= s);
    }

    let steps = n.min(p);
    let mut perm: Vec<usize> = (0..p).collect();
    let mut betas = Vec::with_capacity(steps);
    let mut rank = 0;
    let mut r00 = 0.0;

    for k in 0..steps {
        // pivot: remaining column with the largest trailing norm
        let (best, best_norm) = (k..p)
            .map(|j| (j, norm2(&m[j * n + k..(j + 1) * n])))
            .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if k == 0 {
            r00 = best_norm;
        }
        if best_norm <= RANK_TOL * r00 || best_norm == 0.0 {
            break;
        }
        if best != k {
            swap_columns(&mut m, n, k, best);
            perm.swap(k, best);
        }
        let beta = householder(&mut m[k * n + k..(k + 1) * n]);
        for j in k + 1..p {
            let (head, tail) = m.split_at_mut(j * n);
            apply_reflector(&head[k * n + k..(k + 1) * n], beta, &mut tail[k..n]);
        }
        betas.push(beta);
        rank += 1;
    }

    let mut c = y.to_vec();
    for (k, &beta) in betas.iter().enumerate() {
        apply_reflector(&m[k * n + k..(k + 1) * n], beta, &mut c[k..]);
    }

    let mut coef = vec![0.0; p];
    if rank == p {
        let z = back_substitute(&m, n, p, &c[..p]);
        for (k, &j) in perm.iter().enumerate() {
            coef[j] = z[k] / scale[j];
        }
    } else {
        // undo the equilibration so the norm is minimised in the caller's units
        for (k, &j) in perm.iter().enumerate() {
            m[k * n..k * n + rank.min(k + 1)].iter_mut().for_each(|v| *v *= scale[j]);
        }
        let x = min_norm_trapezoid(&m, n, p, rank, &c[..rank]);
        for (k, &j) in perm.iter().enumerate() {
            coef[j] = x[k];
        }
    }
    LstsqSolution { coef, rank }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    let big = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    big * v.iter().map(|x| (x / big) * (x / big)).sum::<f64>().sqrt()
}

fn swap_columns(m: &mut [f64], n: usize, a: usize, b: usize) {
    let (lo, hi) = (a.min(b), a.max(b));
    let (left, right) = m.split_at_mut(hi * n);
    left[lo * n..(lo + 1) * n].swap_with_slice(&mut right[..n]);
}

/// Turns `v` into a Householder vector in place (`v[0]` holds the
/// resulting diagonal entry `R_kk`, `v[1..]` the reflector tail with an
/// implicit leading 1). Returns `beta` such that `H = I - beta * u u^T`.
fn householder(v: &mut [f64]) -> f64 {
    let alpha = norm2(v);
    if alpha == 0.0 {
        return 0.0;
    }
    let diag = if v[0] > 0.0 { -alpha } else { alpha };
    let u0 = v[0] - diag;
    for x in v[1..].iter_mut() {
        *x /= u0;
    }
    let beta = -u0 / diag;
    v[0] = diag;
    beta
}

/// Applies `H = I - beta u u^T` to `x`, where `u = [1, v[1..]]`.
fn apply_reflector(v: &[f64], beta: f64, x: &mut [f64]) {
    if beta == 0.0 {
        return;
    }
    let dot = x[0] + v[1..].iter().zip(&x[1..]).map(|(a, b)| a * b).sum::<f64>();
    let s = beta * dot;
    x[0] -= s;
    for (xi, vi) in x[1..].iter_mut().zip(&v[1..]) {
        *xi -= s * vi;
    }
}

fn back_substitute(m: &[f64], n: usize, p: usize, c: &[f64]) -> Vec<f64> {
    let mut z = c.to_vec();
    for i in (0..p).rev() {
        let mut s = z[i];
        for j in i + 1..p {
            s -= m[j * n + i] * z[j];
        }
        z[i] = s / m[i * n + i];
    }
    z
}

/// Minimum-norm solution of `W z = c` with `W` the leading `r x p` upper
/// trapezoid of the factored matrix: factor `W^T = Q R`, solve
/// `R^T u = c`, and return `z = Q u`.
fn min_norm_trapezoid(m: &[f64], n: usize, p: usize, r: usize, c: &[f64]) -> Vec<f64> {
    // W^T stored column-major as p x r
    let mut wt = vec![0.0; p * r];
    for i in 0..r {
        for j in i..p {
            wt[i * p + j] = m[j * n + i];
        }
    }
    let mut betas = Vec::with_capacity(r);
    for k in 0..r {
        let beta = householder(&mut wt[k * p + k..(k + 1) * p]);
        for j in k + 1..r {
            let (head, tail) = wt.split_at_mut(j * p);
            apply_reflector(&head[k * p + k..(k + 1) * p], beta, &mut tail[k..p]);
        }
        betas.push(beta);
    }
    // forward substitution with R^T (lower triangular)
    let mut u = vec![0.0; p];
    for i in 0..r {
        let mut s = c[i];
        for (j, uj) in u.iter().enumerate().take(i) {
            s -= wt[i * p + j] * uj;
        }
        u[i] = s / wt[i * p + i];
    }
    for k in (0..r).rev() {
        apply_reflector(&wt[k * p + k..(k + 1) * p], betas[k], &mut u[k..]);
    }
    u
}
