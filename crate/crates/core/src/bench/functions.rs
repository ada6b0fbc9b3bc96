use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::expression::Expression;
use crate::rng::SampleRng;
use crate::term::Term;
use crate::transform::TransformId;

pub const BENCHMARK_IDS: [&str; 17] = [
    "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10", "F11", "F12", "F13", "F14", "F15",
    "F16", "F17",
];

/// One analytic benchmark target.
#[derive(Debug, Clone, Copy)]
pub struct BenchmarkSpec {
    pub id: &'static str,
    pub dim: usize,
    pub target: fn(&[f64]) -> f64,
    /// Every coordinate is sampled uniformly from this interval.
    pub sample_range: (f64, f64),
    pub n_samples: usize,
    /// Whether the target is listed as exactly representable.
    pub expressible: bool,
}

impl BenchmarkSpec {
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.target)(x)
    }
}

fn f1(x: &[f64]) -> f64 {
    let x = x[0];
    x.powi(3) + x.powi(2) + 5.0 * x
}

fn f2(x: &[f64]) -> f64 {
    (1..=4).map(|k| x[0].powi(k)).sum()
}

fn f3(x: &[f64]) -> f64 {
    (1..=5).map(|k| x[0].powi(k)).sum()
}

fn f4(x: &[f64]) -> f64 {
    (1..=6).map(|k| x[0].powi(k)).sum()
}

fn f5(x: &[f64]) -> f64 {
    (x[0] * x[0]).sin() * x[0].cos() - 1.0
}

fn f6(x: &[f64]) -> f64 {
    x[0].sin() + (x[0] + x[0] * x[0]).sin()
}

fn f7(x: &[f64]) -> f64 {
    (x[0] + 1.0).ln() + (x[0] * x[0] + 1.0).ln()
}

fn f8(x: &[f64]) -> f64 {
    5.0 * x[0].abs().sqrt()
}

fn f9(x: &[f64]) -> f64 {
    x[0].sin() + (x[1] * x[1]).sin()
}

fn f10(x: &[f64]) -> f64 {
    6.0 * x[0].sin() * x[1].cos()
}

fn f11(x: &[f64]) -> f64 {
    2.0 - 2.1 * (9.8 * x[0]).cos() * (1.3 * x[1]).sin()
}

fn f12(x: &[f64]) -> f64 {
    (-(x[0] - 1.0).powi(2)).exp() / (1.2 + (x[1] - 2.5).powi(2))
}

fn f13(x: &[f64]) -> f64 {
    10.0 / (5.0 + x.iter().map(|v| (v - 3.0).powi(2)).sum::<f64>())
}

fn f14(x: &[f64]) -> f64 {
    x.iter().product()
}

fn f15(x: &[f64]) -> f64 {
    let x = x[0];
    x.powi(6) / (x.powi(3) + x.powi(2) + 1.0)
}

fn f16(x: &[f64]) -> f64 {
    let x = x[0];
    x / (1.0 - (x * x + x + 1.0).ln())
}

fn f17(x: &[f64]) -> f64 {
    let x = x[0];
    100.0 + (x * x).ln() + 5.0 * x.abs().sqrt()
}

type Target = fn(&[f64]) -> f64;

/// Looks up a benchmark by id (`F1` .. `F17`).
pub fn benchmark(id: &str) -> Result<BenchmarkSpec> {
    let (dim, target, expressible): (usize, Target, bool) = match id {
        "F1" => (1, f1, true),
        "F2" => (1, f2, true),
        "F3" => (1, f3, true),
        "F4" => (1, f4, true),
        "F5" => (1, f5, false),
        "F6" => (1, f6, false),
        "F7" => (1, f7, true),
        "F8" => (1, f8, true),
        "F9" => (2, f9, true),
        "F10" => (2, f10, false),
        "F11" => (2, f11, false),
        "F12" => (2, f12, false),
        "F13" => (5, f13, false),
        "F14" => (5, f14, true),
        "F15" => (1, f15, false),
        "F16" => (1, f16, false),
        "F17" => (1, f17, true),
        _ => return Err(Error::UnknownBenchmark(id.to_string())),
    };
    let id = BENCHMARK_IDS[BENCHMARK_IDS.iter().position(|&b| b == id).expect("listed id")];
    let sample_range = if id == "F7" { (0.0, 2.0) } else { (-5.0, 5.0) };
    Ok(BenchmarkSpec {
        id,
        dim,
        target,
        sample_range,
        n_samples: 600,
        expressible,
    })
}

/// Draws `n_samples` points uniformly over the spec's range and splits them
/// in half: the first half trains, the second half tests.
pub fn sample(spec: &BenchmarkSpec, seed: u64) -> Result<(Dataset, Dataset)> {
    let mut rng = SampleRng::new(seed);
    let (lo, hi) = spec.sample_range;
    let mut x = Vec::with_capacity(spec.n_samples * spec.dim);
    let mut y = Vec::with_capacity(spec.n_samples);
    for _ in 0..spec.n_samples {
        let start = x.len();
        for _ in 0..spec.dim {
            x.push(rng.uniform(lo, hi));
        }
        y.push(spec.eval(&x[start..]));
    }
    let n_train = spec.n_samples / 2;
    let split = n_train * spec.dim;
    let test = Dataset::new(x[split..].to_vec(), y[n_train..].to_vec(), spec.dim)?;
    x.truncate(split);
    y.truncate(n_train);
    Ok((Dataset::new(x, y, spec.dim)?, test))
}

/// A hand-written expression that reproduces an expressible target exactly.
/// `None` for non-expressible targets. F7 uses `log1p`, since
/// `log(x^2 + 1)` is `log1p` applied to the monomial `x^2`.
pub fn witness(id: &str) -> Result<Option<Expression>> {
    use TransformId::*;
    let spec = benchmark(id)?;
    let d = spec.dim;
    let one = |k: i32, t: TransformId| Term::new(vec![k], t);
    let poly = |degree: i32, weights: &[f64]| -> Result<Expression> {
        let terms = (1..=degree).map(|k| one(k, Identity)).collect::<Result<Vec<_>>>()?;
        Expression::new(terms, weights.to_vec(), 0.0, 1)
    };
    let e = match id {
        "F1" => poly(3, &[5.0, 1.0, 1.0])?,
        "F2" => poly(4, &[1.0; 4])?,
        "F3" => poly(5, &[1.0; 5])?,
        "F4" => poly(6, &[1.0; 6])?,
        "F7" => Expression::new(vec![one(1, Log1p)?, one(2, Log1p)?], vec![1.0, 1.0], 0.0, d)?,
        "F8" => Expression::new(vec![one(1, SqrtAbs)?], vec![5.0], 0.0, d)?,
        "F9" => Expression::new(
            vec![Term::new(vec![1, 0], Sin)?, Term::new(vec![0, 2], Sin)?],
            vec![1.0, 1.0],
            0.0,
            d,
        )?,
        "F14" => Expression::new(vec![Term::monomial(vec![1; 5])?], vec![1.0], 0.0, d)?,
        "F17" => Expression::new(vec![one(2, Log)?, one(1, SqrtAbs)?], vec![1.0, 5.0], 100.0, d)?,
        _ => return Ok(None),
    };
    Ok(Some(e))
}
