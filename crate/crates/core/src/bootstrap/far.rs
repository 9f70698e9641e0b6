//! FAR(1) residual bootstrap.

use nalgebra::DMatrix;

use super::{check_replicates, map_indices, BootstrapOptions, MethodKind, SampleEnsemble, ScoreResampler};
use crate::error::{Error, Result};
use crate::fpca::eigendecompose;
use crate::grid::Grid;
use crate::sample::{autocov_centered, sample_mean, FunctionalSample};

/// Fitted first-lag autocorrelation operator.
///
/// `rho_matrix[(t, s)]` is the kernel of the operator; it acts on a curve
/// through quadrature: `(rho f)(t) = sum_s rho[t, s] w_s f(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Far1Fit {
    pub rho_matrix: DMatrix<f64>,
    pub mean_curve: Vec<f64>,
    pub retained_components: usize,
    grid: Grid,
}

impl Far1Fit {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Applies the operator to a curve.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let w = self.grid.weights();
        let p = w.len();
        let wf: Vec<f64> = f.iter().zip(w).map(|(a, b)| a * b).collect();
        (0..p)
            .map(|t| (0..p).map(|s| self.rho_matrix[(t, s)] * wf[s]).sum())
            .collect()
    }
}

/// Yule-Walker fit of `Xc_{w+1} = rho Xc_w + e`.
///
/// The lag-1 cross-covariance `(1/n) sum_{w<n} Xc_{w+1} (x) Xc_w` is composed
/// with a truncated pseudo-inverse of the predictor covariance
/// `(1/n) sum_{w<n} Xc_w (x) Xc_w`, keeping the smallest number of
/// eigencomponents whose eigenvalues reach `regularization` of the total.
pub fn far1_fit(x: &FunctionalSample, regularization: f64) -> Result<Far1Fit> {
    let n = x.n();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    if !(regularization > 0.0 && regularization <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "regularization ratio {regularization} not in (0, 1]"
        )));
    }
    let mean = sample_mean(x);
    let xc = crate::sample::center(x);
    let grid = x.grid().clone();
    let p = x.p();

    let predictors = xc.slice(0, n - 1)?;
    let scale = (n - 1) as f64 / n as f64;
    let gamma0 = autocov_centered(&predictors, 0)?.scale(scale)?;
    // gamma1[(u, t)] = (1/n) sum_w Xc_w(u) Xc_{w+1}(t)
    let gamma1 = autocov_centered(&xc, 1)?;

    let kmax = (n - 1).min(p);
    let decomp = eigendecompose(&gamma0, kmax)?;
    let lead = decomp.eigenvalues()[0];
    if !(lead > DEGENERATE_REL * data_scale(x)) {
        return Err(Error::DegenerateCovariance);
    }
    let mut keep = decomp.components_for_ratio(regularization);
    // never invert numerically-zero directions
    while keep > 1 && decomp.eigenvalues()[keep - 1] <= 1e-12 * lead {
        keep -= 1;
    }

    let w = grid.weights();
    let g1 = gamma1.values();
    let mut rho = DMatrix::zeros(p, p);
    for k in 0..keep {
        let phi = decomp.eigenfunction(k);
        let lam = decomp.eigenvalues()[k];
        // image(t) = sum_s gamma1^T[t, s] w_s phi(s) = sum_s gamma1[s, t] w_s phi(s)
        let image: Vec<f64> = (0..p)
            .map(|t| (0..p).map(|s| g1[(s, t)] * w[s] * phi[s]).sum::<f64>() / lam)
            .collect();
        for t in 0..p {
            for u in 0..p {
                rho[(t, u)] += image[t] * phi[u];
            }
        }
    }
    Ok(Far1Fit {
        rho_matrix: rho,
        mean_curve: mean,
        retained_components: keep,
        grid,
    })
}

const DEGENERATE_REL: f64 = 1e-20;

/// `max |X|^2` times the support length: the size of a lag-0 eigenvalue
/// for data of that magnitude.
fn data_scale(x: &FunctionalSample) -> f64 {
    let amax = x.values().amax();
    amax * amax * (x.grid().end() - x.grid().start())
}

fn is_constant(x: &FunctionalSample) -> bool {
    let xc = crate::sample::center(x);
    xc.values().amax() <= 1e-12 * x.values().amax()
}

/// Centered one-step residuals `e_w = Xc_w - rho Xc_{w-1}`, `w = 2..n`.
pub fn far1_residuals(x: &FunctionalSample, fit: &Far1Fit) -> Result<FunctionalSample> {
    if x.grid() != fit.grid() {
        return Err(Error::DimensionMismatch("sample and fit use different grids".into()));
    }
    let n = x.n();
    if n < 2 {
        return Err(Error::TooFewCurves);
    }
    let centered: Vec<Vec<f64>> = x
        .curves()
        .map(|c| c.iter().zip(&fit.mean_curve).map(|(a, m)| a - m).collect())
        .collect();
    let raw: Vec<Vec<f64>> = (1..n)
        .map(|w| {
            let pred = fit.apply(&centered[w - 1]);
            centered[w].iter().zip(&pred).map(|(a, b)| a - b).collect()
        })
        .collect();
    let resid = FunctionalSample::from_rows(&raw, x.grid().clone())?;
    Ok(crate::sample::center(&resid))
}

/// FAR(1) residual bootstrap: residual curves are ME-bootstrapped through
/// their FPCA and each replicate is regenerated recursively from the first
/// observed curve, `X^b_w = mu + rho (X^b_{w-1} - mu) + e^b_w`.
pub fn far_bootstrap(
    x: &FunctionalSample,
    b: usize,
    opts: &BootstrapOptions,
    seed: u64,
) -> Result<SampleEnsemble> {
    opts.validate()?;
    check_replicates(b)?;
    if x.n() >= 3 && is_constant(x) {
        // rho = 0 and every residual vanishes
        return Ok(SampleEnsemble {
            samples: vec![x.clone(); b],
            method: MethodKind::Far,
            seed,
        });
    }
    let fit = far1_fit(x, opts.far_regularization)?;
    let resid = far1_residuals(x, &fit)?;
    let resampler = ScoreResampler::new(&resid, opts)?;
    let first = x.curve(0);
    let n = x.n();
    let samples = map_indices(opts.parallel, b, |rep| {
        let eps = resampler.replicate(seed, rep)?;
        let mut rows = Vec::with_capacity(n);
        rows.push(first.clone());
        for w in 1..n {
            let prev: Vec<f64> = rows[w - 1]
                .iter()
                .zip(&fit.mean_curve)
                .map(|(a, m)| a - m)
                .collect();
            let pred = fit.apply(&prev);
            let next: Vec<f64> = (0..pred.len())
                .map(|j| fit.mean_curve[j] + pred[j] + eps.get(w - 1, j))
                .collect();
            rows.push(next);
        }
        FunctionalSample::from_rows(&rows, x.grid().clone())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SampleEnsemble {
        samples,
        method: MethodKind::Far,
        seed,
    })
}
