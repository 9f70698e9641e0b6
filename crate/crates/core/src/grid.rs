//! Evaluation grid and quadrature on the function support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered evaluation points `t_1 < ... < t_p` with quadrature weights.
///
/// The default weights are the composite trapezoid rule, so they sum to
/// `t_p - t_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    /// Builds a grid with trapezoid weights.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        validate_points(&points)?;
        let weights = trapezoid_weights(&points);
        Ok(Self { points, weights })
    }

    /// `p` equispaced points on `[a, b]`, both endpoints included.
    pub fn uniform(a: f64, b: f64, p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {p}")));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidGrid(format!("bad interval [{a}, {b}]")));
        }
        let step = (b - a) / (p - 1) as f64;
        let mut points: Vec<f64> = (0..p).map(|j| a + step * j as f64).collect();
        points[p - 1] = b;
        Self::new(points)
    }

    /// The unit interval with `p` equispaced points.
    pub fn unit(p: usize) -> Result<Self> {
        Self::uniform(0.0, 1.0, p)
    }

    /// Grid with caller-supplied nonnegative weights.
    pub fn with_weights(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        validate_points(&points)?;
        if weights.len() != points.len() {
            return Err(Error::InvalidGrid(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidGrid("weights must be finite and nonnegative".into()));
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Quadrature integral of a curve.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        self.check_len(f.len())?;
        Ok(f.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.points.len() {
            return Err(Error::DimensionMismatch(format!(
                "curve has {len} values, grid has {} points",
                self.points.len()
            )));
        }
        Ok(())
    }
}

fn validate_points(points: &[f64]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if let Some(j) = points.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "points not strictly increasing at index {}",
            j + 1
        )));
    }
    Ok(())
}

fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let p = points.len();
    let mut w = vec![0.0; p];
    for j in 0..p - 1 {
        let half = 0.5 * (points[j + 1] - points[j]);
        w[j] += half;
        w[j + 1] += half;
    }
    w
}

/// Quadrature inner product `<f, g> = sum_j w_j f(t_j) g(t_j)`.
pub fn l2_inner(f: &[f64], g: &[f64], grid: &Grid) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch(format!(
            "curves of length {} and {}",
            f.len(),
            g.len()
        )));
    }
    grid.check_len(f.len())?;
    Ok(f.iter()
        .zip(g)
        .zip(grid.weights())
        .map(|((a, b), w)| a * b * w)
        .sum())
}

/// Quadrature L2 distance between two curves.
pub fn l2_distance(f: &[f64], g: &[f64], grid: &Grid) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch(format!(
            "curves of length {} and {}",
            f.len(),
            g.len()
        )));
    }
    grid.check_len(f.len())?;
    let sq: f64 = f
        .iter()
        .zip(g)
        .zip(grid.weights())
        .map(|((a, b), w)| (a - b) * (a - b) * w)
        .sum();
    Ok(sq.sqrt())
}
