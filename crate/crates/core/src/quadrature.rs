//! Gauss–Legendre rules and tensor-product integration over boxes.

use rayon::prelude::*;

use crate::error::Result;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise summation; the split points depend only on the length, so the
/// result is independent of how the terms were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// All points of a tensor-product grid in row-major order, last axis fastest.
pub fn tensor_grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let total: usize = axes.iter().map(Vec::len).product();
    (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; axes.len()];
            for d in (0..axes.len()).rev() {
                let len = axes[d].len();
                p[d] = axes[d][idx % len];
                idx /= len;
            }
            p
        })
        .collect()
}

/// `∫_box f` with an `n`-point rule per axis.
pub fn integrate_box<F>(lower: &[f64], upper: &[f64], n: usize, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let (nodes, weights) = gauss_legendre(n);
    let dim = lower.len();
    let mut axes = Vec::with_capacity(dim);
    let mut jac = 1.0;
    for d in 0..dim {
        let half = 0.5 * (upper[d] - lower[d]);
        let mid = 0.5 * (upper[d] + lower[d]);
        jac *= half;
        axes.push(nodes.iter().map(|t| mid + half * t).collect::<Vec<_>>());
    }
    let idx_axes: Vec<Vec<f64>> = (0..dim).map(|_| (0..n).map(|i| i as f64).collect()).collect();
    let index_grid = tensor_grid(&idx_axes);
    let terms: Vec<f64> = index_grid
        .par_iter()
        .map(|ix| {
            let p: Vec<f64> = ix.iter().enumerate().map(|(d, &i)| axes[d][i as usize]).collect();
            let w: f64 = ix.iter().map(|&i| weights[i as usize]).product();
            Ok(w * f(&p)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(jac * pairwise_sum(&terms))
}
