//! Functional samples: `n` curves observed on a shared grid.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::surface::CovSurface;

/// `n` curves on a common grid, stored as an `n x p` matrix (row = curve).
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    values: DMatrix<f64>,
    grid: Grid,
}

impl FunctionalSample {
    pub fn new(values: DMatrix<f64>, grid: Grid) -> Result<Self> {
        if values.nrows() == 0 {
            return Err(Error::EmptySample);
        }
        if values.ncols() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns for a grid of {} points",
                values.ncols(),
                grid.len()
            )));
        }
        for col in 0..values.ncols() {
            for row in 0..values.nrows() {
                if !values[(row, col)].is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { values, grid })
    }

    pub fn from_rows(rows: &[Vec<f64>], grid: Grid) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        let p = grid.len();
        if let Some(i) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::DimensionMismatch(format!(
                "curve {i} has {} values, grid has {p} points",
                rows[i].len()
            )));
        }
        let values = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
        Self::new(values, grid)
    }

    /// Number of curves.
    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    /// Number of grid points.
    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Copy of curve `i`.
    pub fn curve(&self, i: usize) -> Vec<f64> {
        self.values.row(i).iter().copied().collect()
    }

    pub fn curves(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.n()).map(move |i| self.curve(i))
    }

    /// Values at grid point `j` across all curves (contiguous storage).
    pub(crate) fn column(&self, j: usize) -> &[f64] {
        let n = self.n();
        &self.values.as_slice()[j * n..(j + 1) * n]
    }

    /// Curves `start..end` as a new sample.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.n() {
            return Err(Error::DimensionMismatch(format!(
                "row range {start}..{end} for n = {}",
                self.n()
            )));
        }
        let values = self.values.rows(start, end - start).into_owned();
        Self::new(values, self.grid.clone())
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(&self.values * c, self.grid.clone())
    }
}

/// Pointwise arithmetic mean of the curves.
pub fn sample_mean(x: &FunctionalSample) -> Vec<f64> {
    let n = x.n() as f64;
    (0..x.p()).map(|j| x.column(j).iter().sum::<f64>() / n).collect()
}

/// Subtracts the sample mean from every curve.
pub fn center(x: &FunctionalSample) -> FunctionalSample {
    let mean = sample_mean(x);
    let mut values = x.values.clone();
    for (j, mut col) in values.column_iter_mut().enumerate() {
        col.iter_mut().for_each(|v| *v -= mean[j]);
    }
    FunctionalSample {
        values,
        grid: x.grid.clone(),
    }
}

/// Lag-`lag` autocovariance surface with divisor `n`.
///
/// For `lag >= 0` the entry at `(u, s)` is
/// `(1/n) sum_{j=1}^{n-lag} Xc_j(u) Xc_{j+lag}(s)`; negative lags are the
/// transpose of the positive ones.
pub fn autocov(x: &FunctionalSample, lag: isize) -> Result<CovSurface> {
    let xc = center(x);
    autocov_centered(&xc, lag)
}

/// [`autocov`] on data that is already centered.
pub(crate) fn autocov_centered(xc: &FunctionalSample, lag: isize) -> Result<CovSurface> {
    let n = xc.n();
    let m = lag.unsigned_abs();
    if m >= n {
        return Err(Error::LagOutOfRange { lag, n });
    }
    let p = xc.p();
    let inv_n = 1.0 / n as f64;
    let len = n - m;
    let mut out = DMatrix::zeros(p, p);
    for u in 0..p {
        let cu = xc.column(u);
        for s in 0..p {
            let cs = xc.column(s);
            // gamma_lag(u, s) pairs X_j(u) with X_{j+lag}(s)
            let acc: f64 = if lag >= 0 {
                cu[..len].iter().zip(&cs[m..]).map(|(a, b)| a * b).sum()
            } else {
                cu[m..].iter().zip(&cs[..len]).map(|(a, b)| a * b).sum()
            };
            out[(u, s)] = acc * inv_n;
        }
    }
    CovSurface::new(out, xc.grid.clone())
}
