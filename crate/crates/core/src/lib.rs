//! Bootstrap inference for the long-run covariance of stationary functional
//! time series.
//!
//! Curves are stored on a common grid and integrated with trapezoid
//! quadrature. The crate provides
//!
//! - the kernel sandwich estimator of the long-run covariance surface with a
//!   two-step plug-in bandwidth ([`lrcov`]),
//! - functional principal component analysis on the quadrature inner
//!   product ([`fpca`]),
//! - the maximum-entropy bootstrap for scalar series ([`meboot`]),
//! - IID-score, ME-score, FAR(1)-residual and functional kernel regression
//!   residual bootstraps with confidence interval extraction ([`bootstrap`]),
//! - Brownian-driven FAR/FMA simulators, interval scores and a seeded
//!   Monte-Carlo harness ([`sim`]),
//! - delimited-text ingestion and serialization plus the command drivers
//!   behind the `ftsboot` binary ([`io`]).
//!
//! ```no_run
//! use ftsboot::prelude::*;
//!
//! let spec = DgpSpec::far(vec![0.5], 100, 21);
//! let sample = gen_dgp(&spec, 7).unwrap();
//! let surface = lrcov_estimate(&sample, &LrcovConfig::default()).unwrap();
//! let truth = theoretical_lrcov(&spec, sample.grid()).unwrap();
//! println!("HS error {:.4}", hs_norm(&surface.sub(&truth).unwrap()));
//! ```

pub mod bootstrap;
pub mod error;
pub mod fpca;
pub mod grid;
pub mod io;
pub mod lrcov;
pub mod meboot;
pub mod rng;
pub mod sample;
pub mod sim;
pub mod surface;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bootstrap::{
        bootstrap_lrcov_ensemble, error_ci, far1_fit, far1_residuals, far_bootstrap,
        fkr_bootstrap, fkr_predict, iid_bootstrap, me_score_bootstrap, run_bootstrap,
        surface_ci, BootstrapMethod, BootstrapOptions, Far1Fit, MethodKind, SampleEnsemble, SurfaceEnsemble,
    };
    pub use crate::error::{Error, Result};
    pub use crate::fpca::{eigendecompose, project_scores, reconstruct, EigenDecomp, ScoreMatrix};
    pub use crate::grid::{l2_inner, Grid};
    pub use crate::lrcov::{
        bartlett_weight, flat_top_weight, lrcov_estimate, plugin_bandwidth, Bandwidth,
        KernelFamily, LrcovConfig, WeightKernel,
    };
    pub use crate::meboot::{meboot_ensemble, meboot_replicate, MebootSpec};
    pub use crate::sample::{autocov, center, sample_mean, FunctionalSample};
    pub use crate::sim::{
        brownian_path, gen_dgp, interval_score, run_experiment, theoretical_lrcov, DgpFamily,
        DgpSpec, ExperimentConfig, ScoreReport,
    };
    pub use crate::surface::{hs_norm, CovSurface};
}
