//! Confidence intervals from bootstrap surface ensembles.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::SurfaceEnsemble;
use crate::error::{Error, Result};
use crate::surface::{hs_norm, CovSurface};

/// Linear interpolation between order statistics (`(len - 1) q` position).
/// `sorted` must be ascending and nonempty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Equal-tail interval for the bootstrap estimation error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInterval {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    /// `||C - C^b||` per replicate, in replicate order.
    pub distances: Vec<f64>,
}

/// Distances `D^b = ||C - C^b||` and their `alpha/2`, `1 - alpha/2`
/// quantiles.
pub fn error_ci(ensemble: &SurfaceEnsemble, estimate: &CovSurface, alpha: f64) -> Result<ErrorInterval> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidParameter("need at least two bootstrap surfaces".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} not in (0, 1)")));
    }
    let distances = ensemble
        .surfaces
        .iter()
        .map(|s| Ok(hs_norm(&estimate.sub(s)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(interval_from_distances(distances, alpha))
}

pub(crate) fn interval_from_distances(distances: Vec<f64>, alpha: f64) -> ErrorInterval {
    let mut sorted = distances.clone();
    sorted.sort_by(f64::total_cmp);
    ErrorInterval {
        alpha,
        lower: quantile_sorted(&sorted, alpha / 2.0),
        upper: quantile_sorted(&sorted, 1.0 - alpha / 2.0),
        distances,
    }
}

/// Pointwise `(1 - level)/2` and `(1 + level)/2` quantile surfaces.
pub fn surface_ci(ensemble: &SurfaceEnsemble, level: f64) -> Result<(CovSurface, CovSurface)> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidParameter("need at least two bootstrap surfaces".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("level {level} not in (0, 1)")));
    }
    let first = &ensemble.surfaces[0];
    for s in &ensemble.surfaces[1..] {
        first.check_same_grid(s)?;
    }
    let p = first.p();
    let mut lower = DMatrix::zeros(p, p);
    let mut upper = DMatrix::zeros(p, p);
    let mut buf = vec![0.0; ensemble.len()];
    for u in 0..p {
        for s in 0..p {
            for (slot, surf) in buf.iter_mut().zip(&ensemble.surfaces) {
                *slot = surf.get(u, s);
            }
            buf.sort_by(f64::total_cmp);
            lower[(u, s)] = quantile_sorted(&buf, 0.5 * (1.0 - level));
            upper[(u, s)] = quantile_sorted(&buf, 0.5 * (1.0 + level));
        }
    }
    let grid = first.grid().clone();
    Ok((
        CovSurface::from_parts_unchecked(lower, grid.clone()),
        CovSurface::from_parts_unchecked(upper, grid),
    ))
}
