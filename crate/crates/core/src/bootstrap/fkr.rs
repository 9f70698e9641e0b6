//! Functional Nadaraya-Watson (kernel regression) residual bootstrap.
//!
//! The conditional mean of `X_w` given `X_{w-1}` is estimated by a
//! leave-one-out Nadaraya-Watson smoother with the quadratic kernel
//! `K(x) = 1 - x^2` on `[0, 1]` and the quadrature L2 distance between
//! predictor curves. The bandwidth is a fixed quantile of the pairwise
//! predictor distances.

use super::ci::quantile_sorted;
use super::{check_replicates, map_indices, BootstrapOptions, MethodKind, SampleEnsemble, ScoreResampler};
use crate::error::{Error, Result};
use crate::grid::l2_distance;
use crate::sample::{center, FunctionalSample};

fn quadratic_kernel(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        1.0 - x * x
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FkrFit {
    /// `n - 1` fitted curves; row `i` estimates `X_{i+1}` from `X_i`.
    pub fitted: FunctionalSample,
    pub bandwidth: f64,
}

/// Fitted values `m(X_{w-1})`, `w = 2..n`, with the selected bandwidth.
pub fn fkr_fit(x: &FunctionalSample, bandwidth_quantile: f64) -> Result<FkrFit> {
    let n = x.n();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    if !(bandwidth_quantile > 0.0 && bandwidth_quantile < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth quantile {bandwidth_quantile} not in (0, 1)"
        )));
    }
    let grid = x.grid();
    let curves: Vec<Vec<f64>> = x.curves().collect();
    let m = n - 1; // predictors X_0..X_{n-2}, responses X_1..X_{n-1}

    let mut dist = vec![0.0; m * m];
    let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            let d = l2_distance(&curves[i], &curves[j], grid)?;
            dist[i * m + j] = d;
            dist[j * m + i] = d;
            pairs.push(d);
        }
    }
    pairs.sort_by(f64::total_cmp);
    let h = quantile_sorted(&pairs, bandwidth_quantile);

    let p = x.p();
    let mut fitted = Vec::with_capacity(m);
    for i in 0..m {
        let mut num = vec![0.0; p];
        let mut den = 0.0;
        for j in (0..m).filter(|&j| j != i) {
            let d = dist[i * m + j];
            let u = if d == 0.0 { 0.0 } else { d / h };
            let k = quadratic_kernel(u);
            if k > 0.0 {
                den += k;
                for (acc, v) in num.iter_mut().zip(&curves[j + 1]) {
                    *acc += k * v;
                }
            }
        }
        if den > 0.0 {
            fitted.push(num.into_iter().map(|v| v / den).collect());
        } else {
            // no neighbour inside the bandwidth: nearest predictor's response
            let nearest = (0..m)
                .filter(|&j| j != i)
                .min_by(|&a, &b| dist[i * m + a].total_cmp(&dist[i * m + b]))
                .expect("at least two predictors");
            fitted.push(curves[nearest + 1].clone());
        }
    }
    Ok(FkrFit {
        fitted: FunctionalSample::from_rows(&fitted, grid.clone())?,
        bandwidth: h,
    })
}

/// The `n - 1` leave-one-out fitted curves.
pub fn fkr_predict(x: &FunctionalSample, bandwidth_quantile: f64) -> Result<FunctionalSample> {
    Ok(fkr_fit(x, bandwidth_quantile)?.fitted)
}

/// Kernel-regression residual bootstrap: `X^b_1 = X_1` and
/// `X^b_w = m(X_{w-1}) + e^b_w` with ME-bootstrapped centered residuals.
pub fn fkr_bootstrap(
    x: &FunctionalSample,
    b: usize,
    opts: &BootstrapOptions,
    seed: u64,
) -> Result<SampleEnsemble> {
    opts.validate()?;
    check_replicates(b)?;
    let fit = fkr_fit(x, opts.fkr_bandwidth_quantile)?;
    let n = x.n();
    let p = x.p();
    let raw = x.slice(1, n)?.values() - fit.fitted.values();
    let resid = center(&FunctionalSample::new(raw, x.grid().clone())?);
    let resampler = ScoreResampler::new(&resid, opts)?;
    let samples = map_indices(opts.parallel, b, |rep| {
        let eps = resampler.replicate(seed, rep)?;
        let mut values = x.values().clone();
        for w in 1..n {
            for j in 0..p {
                values[(w, j)] = fit.fitted.get(w - 1, j) + eps.get(w - 1, j);
            }
        }
        FunctionalSample::new(values, x.grid().clone())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SampleEnsemble {
        samples,
        method: MethodKind::Fkr,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn kernel_shape() {
        assert_eq!(quadratic_kernel(0.0), 1.0);
        assert_eq!(quadratic_kernel(0.5), 0.75);
        assert_eq!(quadratic_kernel(1.0), 0.0);
        assert_eq!(quadratic_kernel(1.5), 0.0);
    }

    #[test]
    fn identical_predictors_pick_matching_response() {
        // X_0 = X_1 = a, X_2 = b: predictors (a, a); leave-one-out fit for
        // predictor 0 uses predictor 1 at distance 0 whose response is b
        let grid = Grid::unit(3).unwrap();
        let a = vec![1.0, 1.0, 1.0];
        let b = vec![0.0, 2.0, 5.0];
        let x = FunctionalSample::from_rows(&[a.clone(), a.clone(), b.clone()], grid).unwrap();
        let fit = fkr_fit(&x, 0.2).unwrap();
        assert_eq!(fit.fitted.curve(0), b);
        assert_eq!(fit.fitted.curve(1), a);
    }

    #[test]
    fn needs_three_curves() {
        let x = FunctionalSample::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]], Grid::unit(2).unwrap()).unwrap();
        assert!(fkr_fit(&x, 0.2).is_err());
        let x3 = FunctionalSample::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![3.0, 3.0]], Grid::unit(2).unwrap())
            .unwrap();
        assert!(fkr_fit(&x3, 0.0).is_err());
        assert!(fkr_fit(&x3, 1.0).is_err());
    }
}
