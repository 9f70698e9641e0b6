//! Bivariate surfaces on a grid: lag autocovariances, long-run covariances
//! and bootstrap bounds.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A `p x p` surface `S(u, s)` evaluated on `grid x grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSurface {
    values: DMatrix<f64>,
    grid: Grid,
}

impl CovSurface {
    pub fn new(values: DMatrix<f64>, grid: Grid) -> Result<Self> {
        let p = grid.len();
        if values.nrows() != p || values.ncols() != p {
            return Err(Error::DimensionMismatch(format!(
                "surface is {}x{}, grid has {p} points",
                values.nrows(),
                values.ncols()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx % p,
                col: idx / p,
            });
        }
        Ok(Self { values, grid })
    }

    pub fn zeros(grid: Grid) -> Self {
        let p = grid.len();
        Self {
            values: DMatrix::zeros(p, p),
            grid,
        }
    }

    /// Surface `f(u, s)` sampled on the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let t = grid.points().to_vec();
        let values = DMatrix::from_fn(t.len(), t.len(), |i, j| f(t[i], t[j]));
        Self::new(values, grid)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p(&self) -> usize {
        self.grid.len()
    }

    pub fn get(&self, u: usize, s: usize) -> f64 {
        self.values[(u, s)]
    }

    pub fn transpose(&self) -> Self {
        Self {
            values: self.values.transpose(),
            grid: self.grid.clone(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(&self.values * c, self.grid.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::new(&self.values + &other.values, self.grid.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::new(&self.values - &other.values, self.grid.clone())
    }

    /// `max |S(u,s) - S(s,u)|` relative to `max |S|` (0 for the zero surface).
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.amax();
        if scale == 0.0 {
            return 0.0;
        }
        let p = self.p();
        let mut dev = 0.0f64;
        for u in 0..p {
            for s in (u + 1)..p {
                dev = dev.max((self.values[(u, s)] - self.values[(s, u)]).abs());
            }
        }
        dev / scale
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol
    }

    /// Quadrature integral of the diagonal, `int S(t, t) dt`.
    pub fn trace_integral(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .enumerate()
            .map(|(j, w)| w * self.values[(j, j)])
            .sum()
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch("surfaces live on different grids".into()));
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(values: DMatrix<f64>, grid: Grid) -> Self {
        Self { values, grid }
    }
}

/// Hilbert-Schmidt (double-integral L2) norm using the grid's quadrature
/// weights in both coordinates.
pub fn hs_norm(s: &CovSurface) -> f64 {
    let w = s.grid.weights();
    let p = w.len();
    let mut acc = 0.0;
    for col in 0..p {
        let mut inner = 0.0;
        for row in 0..p {
            let v = s.values[(row, col)];
            inner += w[row] * v * v;
        }
        acc += w[col] * inner;
    }
    acc.sqrt()
}
