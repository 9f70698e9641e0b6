//! Functional bootstrap schemes and confidence interval extraction.
//!
//! Four ways of generating bootstrap replicates of a functional sample:
//!
//! | method | what is resampled |
//! |--------|-------------------|
//! | [`MethodKind::Iid`] | principal component scores, each column with replacement |
//! | [`MethodKind::MeScore`] | principal component scores, each column by the ME bootstrap |
//! | [`MethodKind::Far`] | FAR(1) residual curves, ME-bootstrapped through their own FPCA |
//! | [`MethodKind::Fkr`] | Nadaraya-Watson residual curves, same residual machinery |
//!
//! Replicate `b` of a call with seed `s` only consumes streams derived from
//! `(s, b)`, so results do not depend on scheduling and parallel runs are
//! bitwise identical to sequential ones.

mod ci;
mod far;
mod fkr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpca::{Fpca, ScoreMatrix};
use crate::lrcov::{lrcov_estimate, LrcovConfig};
use crate::meboot::{MeDensity, MebootSpec};
use crate::rng;
use crate::sample::FunctionalSample;
use crate::surface::CovSurface;

pub use ci::{error_ci, quantile_sorted, surface_ci, ErrorInterval};
pub use far::{far1_fit, far1_residuals, far_bootstrap, Far1Fit};
pub use fkr::{fkr_bootstrap, fkr_fit, fkr_predict, FkrFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Iid,
    MeScore,
    Far,
    Fkr,
}

impl MethodKind {
    pub const ALL: [MethodKind; 4] = [Self::Iid, Self::MeScore, Self::Far, Self::Fkr];

    /// Short label used in tables and on the command line.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Iid => "iid",
            Self::MeScore => "me",
            Self::Far => "far",
            Self::Fkr => "fkr",
        }
    }
}

impl std::fmt::Display for MethodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iid" => Ok(Self::Iid),
            "me" | "me_score" | "meboot" => Ok(Self::MeScore),
            "far" | "far1" => Ok(Self::Far),
            "fkr" => Ok(Self::Fkr),
            other => Err(Error::InvalidParameter(format!("unknown bootstrap method {other:?}"))),
        }
    }
}

/// Tuning shared by the bootstrap schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOptions {
    pub meboot: MebootSpec,
    /// Cumulative eigenvalue ratio kept when inverting the lag-0 operator.
    pub far_regularization: f64,
    /// Quantile of pairwise predictor distances used as the NW bandwidth.
    pub fkr_bandwidth_quantile: f64,
    /// Cumulative eigenvalue ratio kept by the score decompositions.
    pub fpca_ratio: f64,
    pub parallel: bool,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        Self {
            meboot: MebootSpec::default(),
            far_regularization: 0.85,
            fkr_bandwidth_quantile: 0.2,
            fpca_ratio: 1.0,
            parallel: true,
        }
    }
}

impl BootstrapOptions {
    pub fn validate(&self) -> Result<()> {
        self.meboot.validate()?;
        if !(self.far_regularization > 0.0 && self.far_regularization <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "FAR regularization ratio {} not in (0, 1]",
                self.far_regularization
            )));
        }
        if !(self.fkr_bandwidth_quantile > 0.0 && self.fkr_bandwidth_quantile < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "FKR bandwidth quantile {} not in (0, 1)",
                self.fkr_bandwidth_quantile
            )));
        }
        if !(self.fpca_ratio > 0.0 && self.fpca_ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "FPCA ratio {} not in (0, 1]",
                self.fpca_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapMethod {
    pub kind: MethodKind,
    pub options: BootstrapOptions,
}

impl BootstrapMethod {
    pub fn new(kind: MethodKind) -> Self {
        Self {
            kind,
            options: BootstrapOptions::default(),
        }
    }
}

/// Bootstrap replicates of a functional sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEnsemble {
    pub samples: Vec<FunctionalSample>,
    pub method: MethodKind,
    pub seed: u64,
}

impl SampleEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Long-run covariance surfaces of bootstrap replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceEnsemble {
    pub surfaces: Vec<CovSurface>,
    pub method: MethodKind,
    pub seed: u64,
}

impl SurfaceEnsemble {
    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }
}

pub(crate) fn map_indices<T, F>(parallel: bool, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..count).into_par_iter().map(f).collect()
    } else {
        (0..count).map(f).collect()
    }
}

fn check_replicates(b: usize) -> Result<()> {
    if b == 0 {
        return Err(Error::InvalidParameter("need at least one bootstrap replicate".into()));
    }
    Ok(())
}

/// Dispatches to the scheme named by `method.kind`.
pub fn run_bootstrap(
    x: &FunctionalSample,
    method: &BootstrapMethod,
    b: usize,
    seed: u64,
) -> Result<SampleEnsemble> {
    match method.kind {
        MethodKind::Iid => iid_bootstrap(x, b, &method.options, seed),
        MethodKind::MeScore => me_score_bootstrap(x, b, &method.options, seed),
        MethodKind::Far => far_bootstrap(x, b, &method.options, seed),
        MethodKind::Fkr => fkr_bootstrap(x, b, &method.options, seed),
    }
}

/// Resamples every score column independently with replacement and
/// reconstructs with the estimated mean and eigenfunctions.
pub fn iid_bootstrap(
    x: &FunctionalSample,
    b: usize,
    opts: &BootstrapOptions,
    seed: u64,
) -> Result<SampleEnsemble> {
    opts.validate()?;
    check_replicates(b)?;
    let fpca = Fpca::fit(x, opts.fpca_ratio)?;
    let n = x.n();
    let k = fpca.decomp.k();
    let samples = map_indices(opts.parallel, b, |rep| {
        let mut rng = rng::stream(rng::derive(seed, rep as u64));
        let mut scores = ScoreMatrix::zeros(n, k);
        for col in 0..k {
            let orig = fpca.scores.column(col);
            let drawn: Vec<f64> = (0..n).map(|_| orig[rng.random_range(0..n)]).collect();
            scores.set_column(col, &drawn);
        }
        fpca.reconstruct_with(&scores)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SampleEnsemble {
        samples,
        method: MethodKind::Iid,
        seed,
    })
}

/// FPCA of a sample with one ME density per score column; draws functional
/// replicates conditional on the mean and eigenfunctions.
#[derive(Debug, Clone)]
pub struct ScoreResampler {
    fpca: Fpca,
    densities: Vec<MeDensity>,
}

impl ScoreResampler {
    pub fn new(x: &FunctionalSample, opts: &BootstrapOptions) -> Result<Self> {
        let fpca = Fpca::fit(x, opts.fpca_ratio)?;
        let densities = (0..fpca.decomp.k())
            .map(|col| MeDensity::new(&fpca.scores.column(col), &opts.meboot))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { fpca, densities })
    }

    pub fn fpca(&self) -> &Fpca {
        &self.fpca
    }

    /// Replicate `rep`; score column `k` uses the stream `derive(seed, rep, k)`.
    pub fn replicate(&self, seed: u64, rep: usize) -> Result<FunctionalSample> {
        let n = self.fpca.scores.n();
        let mut scores = ScoreMatrix::zeros(n, self.densities.len());
        for (col, density) in self.densities.iter().enumerate() {
            let mut rng = rng::stream(rng::derive_path(seed, &[rep as u64, col as u64]));
            scores.set_column(col, &density.draw(&mut rng));
        }
        self.fpca.reconstruct_with(&scores)
    }

    pub fn scores(&self) -> &ScoreMatrix {
        &self.fpca.scores
    }
}

/// Bootstraps every score column with the maximum-entropy bootstrap and
/// reconstructs `mean + sum_k beta^b_{i,k} phi_k`.
pub fn me_score_bootstrap(
    x: &FunctionalSample,
    b: usize,
    opts: &BootstrapOptions,
    seed: u64,
) -> Result<SampleEnsemble> {
    opts.validate()?;
    check_replicates(b)?;
    let resampler = ScoreResampler::new(x, opts)?;
    let samples = map_indices(opts.parallel, b, |rep| resampler.replicate(seed, rep))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleEnsemble {
        samples,
        method: MethodKind::MeScore,
        seed,
    })
}

/// Long-run covariance of every replicate. With a plug-in bandwidth the
/// bandwidth is re-selected on each replicate.
pub fn bootstrap_lrcov_ensemble(
    ensemble: &SampleEnsemble,
    cfg: &LrcovConfig,
    parallel: bool,
) -> Result<SurfaceEnsemble> {
    let surfaces = map_indices(parallel, ensemble.len(), |rep| {
        lrcov_estimate(&ensemble.samples[rep], cfg)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceEnsemble {
        surfaces,
        method: ensemble.method,
        seed: ensemble.seed,
    })
}
