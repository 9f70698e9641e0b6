//! Monte-Carlo comparison of bootstrap methods by averaged interval score.
//!
//! For every DGP and replication `r` a sample is simulated, its long-run
//! covariance `C` estimated and the true error `D = ||K - C||` recorded
//! against the theoretical surface `K`. Every method then bootstraps the
//! same sample with the same seed, re-estimates `C^b` on each replicate and
//! forms the equal-tail interval of `D^b = ||C - C^b||`; the interval score
//! of `D` is averaged over replications.
//!
//! Replication `r` draws from `derive(master_seed, r)` regardless of the
//! DGP, so different DGPs see common random numbers as well.

use serde::{Deserialize, Serialize};

use super::dgp::{gen_dgp, theoretical_lrcov, DgpSpec};
use super::score::interval_score;
use crate::bootstrap::{
    bootstrap_lrcov_ensemble, error_ci, map_indices, run_bootstrap, BootstrapMethod, MethodKind,
};
use crate::error::{Error, Result};
use crate::lrcov::{lrcov_estimate, LrcovConfig};
use crate::rng;
use crate::surface::hs_norm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dgps: Vec<DgpSpec>,
    pub methods: Vec<BootstrapMethod>,
    pub replications: usize,
    pub repetitions: usize,
    pub alphas: Vec<f64>,
    pub master_seed: u64,
    pub lrcov: LrcovConfig,
    pub parallel: bool,
}

impl ExperimentConfig {
    /// All four methods with default options, Bartlett plug-in estimation and
    /// `alpha` in {0.05, 0.2, 0.5}.
    pub fn new(dgps: Vec<DgpSpec>, replications: usize, repetitions: usize, master_seed: u64) -> Self {
        Self {
            dgps,
            methods: MethodKind::ALL.iter().map(|k| BootstrapMethod::new(*k)).collect(),
            replications,
            repetitions,
            alphas: vec![0.05, 0.2, 0.5],
            master_seed,
            lrcov: LrcovConfig::default(),
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dgps.is_empty() || self.methods.is_empty() || self.alphas.is_empty() {
            return Err(Error::InvalidParameter(
                "experiment needs at least one DGP, method and alpha".into(),
            ));
        }
        if self.replications < 1 {
            return Err(Error::InvalidParameter("need R >= 1 replications".into()));
        }
        if self.repetitions < 2 {
            return Err(Error::InvalidParameter("need B >= 2 bootstrap repetitions".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::InvalidParameter(format!("alpha {a} not in (0, 1)")));
        }
        for d in &self.dgps {
            d.validate()?;
        }
        for m in &self.methods {
            m.options.validate()?;
        }
        Ok(())
    }
}

/// Scores of one `(dgp, method, alpha)` combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreCell {
    pub dgp: String,
    pub n: usize,
    pub method: MethodKind,
    pub alpha: f64,
    /// Per-replication scores, `None` where that replication failed.
    pub scores: Vec<Option<f64>>,
    pub failures: Vec<String>,
}

impl ScoreCell {
    /// Arithmetic mean over successful replications; `None` if all failed.
    pub fn mean_score(&self) -> Option<f64> {
        let ok: Vec<f64> = self.scores.iter().flatten().copied().collect();
        if ok.is_empty() {
            None
        } else {
            Some(ok.iter().sum::<f64>() / ok.len() as f64)
        }
    }

    pub fn succeeded(&self) -> usize {
        self.scores.iter().flatten().count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    /// Ordered by DGP, then method, then alpha (configuration order).
    pub cells: Vec<ScoreCell>,
    /// `||K - C||` per DGP and replication.
    pub truth_errors: Vec<Vec<f64>>,
    pub config: ExperimentConfig,
}

impl ScoreReport {
    pub fn cell(&self, dgp: &str, n: usize, method: MethodKind, alpha: f64) -> Option<&ScoreCell> {
        self.cells
            .iter()
            .find(|c| c.dgp == dgp && c.n == n && c.method == method && c.alpha == alpha)
    }

    pub fn mean(&self, dgp: &DgpSpec, method: MethodKind, alpha: f64) -> Option<f64> {
        self.cell(&dgp.label(), dgp.n, method, alpha)?.mean_score()
    }

    /// For each cell, whether it holds the smallest averaged score among the
    /// methods of its `(dgp, n, alpha)` group. Ties go to the first method;
    /// groups where every method failed have no minimum.
    pub fn minimum_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.cells.len()];
        let mut seen: Vec<(String, usize, u64)> = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            let key = (c.dgp.clone(), c.n, c.alpha.to_bits());
            if seen.contains(&key) {
                continue;
            }
            let best = self
                .cells
                .iter()
                .enumerate()
                .skip(i)
                .filter(|(_, o)| o.dgp == c.dgp && o.n == c.n && o.alpha == c.alpha)
                .filter_map(|(j, o)| o.mean_score().map(|s| (j, s)))
                .fold(None::<(usize, f64)>, |acc, (j, s)| match acc {
                    Some((_, b)) if b <= s => acc,
                    _ => Some((j, s)),
                });
            if let Some((j, _)) = best {
                flags[j] = true;
            }
            seen.push(key);
        }
        flags
    }
}

struct ReplicationOutcome {
    truth_error: f64,
    /// `[method][alpha]`
    scores: Vec<std::result::Result<Vec<f64>, String>>,
}

fn run_replication(
    cfg: &ExperimentConfig,
    dgp: &DgpSpec,
    r: usize,
    inner_parallel: bool,
) -> std::result::Result<ReplicationOutcome, String> {
    let seed_r = rng::derive(cfg.master_seed, r as u64);
    let sample = gen_dgp(dgp, rng::derive(seed_r, 0)).map_err(|e| e.to_string())?;
    let boot_seed = rng::derive(seed_r, 1);
    let estimate = lrcov_estimate(&sample, &cfg.lrcov).map_err(|e| e.to_string())?;
    let truth = theoretical_lrcov(dgp, sample.grid()).map_err(|e| e.to_string())?;
    let truth_error = hs_norm(&truth.sub(&estimate).map_err(|e| e.to_string())?);

    let scores = cfg
        .methods
        .iter()
        .map(|m| {
            let mut method = *m;
            method.options.parallel = inner_parallel;
            let run = || -> Result<Vec<f64>> {
                let ens = run_bootstrap(&sample, &method, cfg.repetitions, boot_seed)?;
                let surfaces = bootstrap_lrcov_ensemble(&ens, &cfg.lrcov, inner_parallel)?;
                cfg.alphas
                    .iter()
                    .map(|&a| {
                        let ci = error_ci(&surfaces, &estimate, a)?;
                        interval_score(ci.lower, ci.upper, truth_error, a)
                    })
                    .collect()
            };
            run().map_err(|e| e.to_string())
        })
        .collect();
    Ok(ReplicationOutcome {
        truth_error,
        scores,
    })
}

/// Runs the full `dgps x replications x methods` design.
///
/// A failing replication is recorded in the affected cells and never aborts
/// the others. Results are independent of thread scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ScoreReport> {
    cfg.validate()?;
    let reps = cfg.replications;
    let jobs = cfg.dgps.len() * reps;
    let outcomes = map_indices(cfg.parallel, jobs, |job| {
        let (d, r) = (job / reps, job % reps);
        run_replication(cfg, &cfg.dgps[d], r, false)
    });

    let mut cells = Vec::new();
    let mut truth_errors = Vec::with_capacity(cfg.dgps.len());
    for (d, dgp) in cfg.dgps.iter().enumerate() {
        let block = &outcomes[d * reps..(d + 1) * reps];
        truth_errors.push(
            block
                .iter()
                .map(|o| o.as_ref().map_or(f64::NAN, |o| o.truth_error))
                .collect(),
        );
        for (mi, m) in cfg.methods.iter().enumerate() {
            for (ai, &alpha) in cfg.alphas.iter().enumerate() {
                let mut scores = Vec::with_capacity(reps);
                let mut failures = Vec::new();
                for (r, o) in block.iter().enumerate() {
                    let res = o.as_ref().map_err(Clone::clone).and_then(|o| o.scores[mi].clone());
                    match res {
                        Ok(v) => scores.push(Some(v[ai])),
                        Err(e) => {
                            scores.push(None);
                            failures.push(format!("replication {r}: {e}"));
                        }
                    }
                }
                cells.push(ScoreCell {
                    dgp: dgp.label(),
                    n: dgp.n,
                    method: m.kind,
                    alpha,
                    scores,
                    failures,
                });
            }
        }
    }
    Ok(ScoreReport {
        cells,
        truth_errors,
        config: cfg.clone(),
    })
}
