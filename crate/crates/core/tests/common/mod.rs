#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sasaki_core::models::random::random_point;
use sasaki_core::models::ModelChart;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every built-in chart the suites sample, with a box well inside its domain.
pub fn charts() -> Vec<(ModelChart, Vec<f64>, Vec<f64>)> {
    vec![
        (ModelChart::euclidean(2), vec![-1.0; 2], vec![1.0; 2]),
        (ModelChart::euclidean(3), vec![-1.0; 3], vec![1.0; 3]),
        (ModelChart::nil3(), vec![-1.5; 3], vec![1.5; 3]),
        (ModelChart::hyperbolic(2, 1.0), vec![-1.0, 0.5], vec![1.0, 2.0]),
        (ModelChart::hyperbolic(3, 2.0), vec![-1.0, -1.0, 0.5], vec![1.0, 1.0, 2.0]),
    ]
}

pub fn points(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64], k: usize) -> Vec<Vec<f64>> {
    (0..k).map(|_| random_point(rng, lo, hi)).collect()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[track_caller]
pub fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    let d = max_diff(a, b);
    assert!(d <= tol, "{a:?} vs {b:?}: off by {d:e}");
}
