//! Quadrature and one-dimensional maximisation helpers.
//!
//! Sample points are evaluated on the rayon pool and always combined in index
//! order, so results are bit-identical regardless of the number of threads.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{invalid, Result};

/// Smallest step count accepted by [`simpson`].
pub const MIN_SIMPSON_STEPS: usize = 64;

/// Default step count for accumulated averages.
pub const DEFAULT_SIMPSON_STEPS: usize = 512;

/// Evaluates `f` at every point of `xs` concurrently, preserving order.
pub fn evaluate_ordered<F>(xs: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

/// Composite Simpson rule over `[a, b]` with `steps` sub-intervals.
///
/// `steps` must be even and at least [`MIN_SIMPSON_STEPS`].
pub fn simpson<F>(f: F, a: f64, b: f64, steps: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let xs = simpson_nodes(a, b, steps)?;
    let ys = evaluate_ordered(&xs, f)?;
    Ok(simpson_sum(&ys, a, b))
}

/// Equally spaced Simpson nodes `a, a+h, …, b` (`steps + 1` points).
pub fn simpson_nodes(a: f64, b: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < MIN_SIMPSON_STEPS || !steps.is_multiple_of(2) {
        return Err(invalid(format!("Simpson steps must be even and >= {MIN_SIMPSON_STEPS}, got {steps}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(invalid("integration limits must be finite"));
    }
    let h = (b - a) / steps as f64;
    Ok((0..=steps).map(|i| if i == steps { b } else { a + h * i as f64 }).collect())
}

/// Applies Simpson weights to precomputed samples on the nodes of
/// [`simpson_nodes`].
pub fn simpson_sum(ys: &[f64], a: f64, b: f64) -> f64 {
    let steps = ys.len() - 1;
    let h = (b - a) / steps as f64;
    let mut acc = ys[0] + ys[steps];
    for (i, y) in ys.iter().enumerate().take(steps).skip(1) {
        acc += if i % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    acc * h / 3.0
}

/// Gauss–Hermite nodes and weights for the weight function `exp(-x²)`,
/// computed by Golub–Welsch from the Hermite Jacobi matrix.
///
/// Nodes are returned in ascending order; weights sum to √π.
pub fn gauss_hermite(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(invalid("Gauss-Hermite order must be positive"));
    }
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let off = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = off;
        jacobi[(k, k - 1)] = off;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mu0 = std::f64::consts::PI.sqrt();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Enforce the exact reflection symmetry of the rule.
    let n = pairs.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    Ok(pairs.into_iter().unzip())
}

/// Location and value of a maximum of `f` on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Maximises `f` on `[a, b]`: a uniform scan with `samples` points, followed
/// by golden-section refinement around every sampled local maximum.
///
/// Maxima whose values agree within `1e-9` are treated as ties; the
/// smallest abscissa wins.
pub fn maximize<F>(f: F, a: f64, b: f64, samples: usize) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if samples < 3 || !a.is_finite() || !b.is_finite() || a >= b {
        return Err(invalid("maximize needs a < b and at least 3 samples"));
    }
    let h = (b - a) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| a + h * i as f64).collect();
    let ys = evaluate_ordered(&xs, &f)?;

    let mut candidates = Vec::new();
    for i in 0..samples {
        let left = if i == 0 { f64::NEG_INFINITY } else { ys[i - 1] };
        let right = if i + 1 == samples { f64::NEG_INFINITY } else { ys[i + 1] };
        if ys[i] >= left && ys[i] >= right {
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(samples - 1)];
            candidates.push(golden_section(&f, lo, hi, Maximum { x: xs[i], value: ys[i] })?);
        }
    }
    let best = candidates.iter().map(|m| m.value).fold(f64::NEG_INFINITY, f64::max);
    Ok(candidates
        .into_iter()
        .filter(|m| m.value >= best - 1e-9)
        .min_by(|p, q| p.x.total_cmp(&q.x))
        .expect("scan always yields a candidate"))
}

fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64, seed: Maximum) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = seed;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.value {
            best = Maximum { x, value: v };
        }
    }
    Ok(best)
}
