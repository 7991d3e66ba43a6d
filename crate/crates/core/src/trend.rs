//! Finite-data trend classification for length and range sequences.
//!
//! Each candidate shape `f` (log n, n^{1/d} for d = 2..=MAX_ROOT, and n) is
//! fitted as `y ≈ C·f(n)` through the origin by least squares over every
//! index `n ≥ 2`. The shape with the smallest relative RMS residual wins, provided that residual is below [`RESIDUAL_LIMIT`].
//! A winning linear shape additionally needs a positive liminf estimate
//! (the least `y/n` over the tail); anything else is inconclusive.

use serde::{Deserialize, Serialize};

/// Largest root degree tried as a polynomial shape.
pub const MAX_ROOT: u32 = 6;

/// Relative RMS residual a shape must beat to be accepted.
pub const RESIDUAL_LIMIT: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Linear,
    /// Growth like n^{1/d}.
    Polynomial(u32),
    Logarithmic,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Log,
    Root(u32),
}

impl Shape {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            Shape::Log => n.ln(),
            Shape::Root(d) => n.powf(1.0 / f64::from(d)),
        }
    }

    fn candidates() -> impl Iterator<Item = Shape> {
        std::iter::once(Shape::Log).chain((1..=MAX_ROOT).rev().map(Shape::Root))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeFit {
    pub shape: Shape,
    pub constant: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub trend: Trend,
    /// Fitted constant of the winning shape (0 when inconclusive).
    pub constant: f64,
    /// least y/n over the tail.
    pub liminf_slope: f64,
    pub fits: Vec<ShapeFit>,
}

/// Classifies the sequence `(n, y)`; points with `n < 2` are ignored.
pub fn classify(points: &[(u64, f64)]) -> TrendFit {
    let tail: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, _)| n >= 2)
        .map(|&(n, y)| (n as f64, y))
        .collect();
    let inconclusive = |fits| TrendFit {
        trend: Trend::Inconclusive,
        constant: 0.0,
        liminf_slope: 0.0,
        fits,
    };
    if tail.len() < 2 {
        return inconclusive(Vec::new());
    }
    let mean_y = tail.iter().map(|p| p.1).sum::<f64>() / tail.len() as f64;
    let liminf_slope = tail.iter().map(|&(n, y)| y / n).fold(f64::INFINITY, f64::min);
    if mean_y <= 0.0 {
        return inconclusive(Vec::new());
    }

    let fits: Vec<ShapeFit> = Shape::candidates()
        .map(|shape| {
            let sff: f64 = tail.iter().map(|&(n, _)| shape.eval(n).powi(2)).sum();
            let syf: f64 = tail.iter().map(|&(n, y)| y * shape.eval(n)).sum();
            let constant = syf / sff;
            let sse: f64 = tail
                .iter()
                .map(|&(n, y)| (y - constant * shape.eval(n)).powi(2))
                .sum();
            let residual = (sse / tail.len() as f64).sqrt() / mean_y;
            ShapeFit {
                shape,
                constant,
                residual,
            }
        })
        .collect();

    let best = fits
        .iter()
        .copied()
        .min_by(|a, b| a.residual.total_cmp(&b.residual))
        .expect("at least one candidate shape");
    let trend = if best.residual >= RESIDUAL_LIMIT {
        Trend::Inconclusive
    } else {
        match best.shape {
            Shape::Log => Trend::Logarithmic,
            Shape::Root(1) if liminf_slope > 0.0 => Trend::Linear,
            Shape::Root(1) => Trend::Inconclusive,
            Shape::Root(d) => Trend::Polynomial(d),
        }
    };
    TrendFit {
        constant: if trend == Trend::Inconclusive { 0.0 } else { best.constant },
        trend,
        liminf_slope,
        fits,
    }
}

/// Smallest `C` with `y ≤ C·log(n)` for every point with `n ≥ min_n`
/// (natural logarithm). `min_n` must be at least 2.
pub fn log_constant(points: &[(u64, f64)], min_n: u64) -> f64 {
    assert!(min_n >= 2, "log(1) = 0 admits no constant");
    points
        .iter()
        .filter(|&&(n, _)| n >= min_n)
        .map(|&(n, y)| y / (n as f64).ln())
        .fold(0.0, f64::max)
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// RMS residual of the least-squares line through `(xs, ys)`.
pub fn line_residual(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let b = slope(xs, ys);
    let a = ys.iter().sum::<f64>() / n - b * xs.iter().sum::<f64>() / n;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (sse / n).sqrt()
}
