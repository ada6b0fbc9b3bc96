//! Benchmark targets and generators for reproducing the accuracy and
//! polynomial-recovery experiments.

mod functions;
mod poly;

pub use functions::{benchmark, sample, witness, BenchmarkSpec, BENCHMARK_IDS};
pub use poly::{random_polynomial, recovered, PolySpec, DEFAULT_COEFF_TOL};
