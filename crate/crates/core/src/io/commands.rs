//! Batch drivers for the `ftsboot` subcommands.
//!
//! Every command is a pure function of its [`RunConfig`]: rerunning with the
//! same configuration rewrites byte-identical files.

use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::RunConfig;
use super::format::{read_sample, write_json, write_sample, write_surface, write_vector};
use super::ingest::ingest;
use crate::bootstrap::{bootstrap_lrcov_ensemble, error_ci, run_bootstrap, surface_ci};
use crate::error::{Error, Result};
use crate::lrcov::lrcov_estimate_detailed;
use crate::sim::{gen_dgp, run_experiment};

/// Paths written by a command, in writing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Out<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
        Ok(Self {
            dir: &cfg.out,
            files: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn done(self) -> CommandOutput {
        CommandOutput { files: self.files }
    }
}

/// Writes a simulated sample to `sample.csv` and `sample.json`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<CommandOutput> {
    let seed = cfg.require_seed()?;
    let dgp = cfg.simulation_dgp();
    log::info!("resolved config: {cfg:?}");
    let x = gen_dgp(&dgp, seed)?;
    let mut out = Out::new(cfg)?;
    write_sample(&out.path("sample.csv"), &x)?;
    let meta = json!({
        "command": "simulate",
        "dgp": dgp.label(),
        "n": x.n(),
        "p": x.p(),
        "seed": seed,
        "config": cfg,
    });
    write_json(&out.path("sample.json"), &meta)?;
    Ok(out.done())
}

/// Writes the long-run covariance estimate to `estimate.csv` and the chosen
/// bandwidth to `estimate.json`.
pub fn cmd_estimate(cfg: &RunConfig) -> Result<CommandOutput> {
    let x = read_sample(cfg.require_input()?)?;
    log::info!("resolved config: {cfg:?}");
    let est = lrcov_estimate_detailed(&x, &cfg.lrcov)?;
    let mut out = Out::new(cfg)?;
    write_surface(&out.path("estimate.csv"), &est.surface)?;
    let meta = json!({
        "command": "estimate",
        "kernel": cfg.lrcov.kernel.name(),
        "h": est.bandwidth,
        "plugin": est.plugin,
        "n": x.n(),
        "p": x.p(),
        "config": cfg,
    });
    write_json(&out.path("estimate.json"), &meta)?;
    Ok(out.done())
}

/// Runs one bootstrap method on a loaded sample. Writes the point estimate,
/// the pointwise `level` band (`lower.csv`, `upper.csv`), the replicate
/// distances `||C - C^b||` and, per alpha, the equal-tail error interval.
pub fn cmd_bootstrap(cfg: &RunConfig) -> Result<CommandOutput> {
    let seed = cfg.require_seed()?;
    let x = read_sample(cfg.require_input()?)?;
    log::info!("resolved config: {cfg:?}");
    let est = lrcov_estimate_detailed(&x, &cfg.lrcov)?;
    let method = cfg.method();
    let ens = run_bootstrap(&x, &method, cfg.repetitions, seed)?;
    let surfaces = bootstrap_lrcov_ensemble(&ens, &cfg.lrcov, cfg.options.parallel)?;
    let (lower, upper) = surface_ci(&surfaces, cfg.level)?;
    let intervals = cfg
        .alphas
        .iter()
        .map(|&a| error_ci(&surfaces, &est.surface, a))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Out::new(cfg)?;
    write_surface(&out.path("estimate.csv"), &est.surface)?;
    write_surface(&out.path("lower.csv"), &lower)?;
    write_surface(&out.path("upper.csv"), &upper)?;
    let distances = intervals.first().map(|ci| ci.distances.clone()).unwrap_or_default();
    write_vector(&out.path("distances.csv"), "distance", &distances)?;
    let meta = json!({
        "command": "bootstrap",
        "method": method.kind.label(),
        "repetitions": cfg.repetitions,
        "level": cfg.level,
        "h": est.bandwidth,
        "intervals": intervals
            .iter()
            .map(|ci| json!({"alpha": ci.alpha, "lower": ci.lower, "upper": ci.upper}))
            .collect::<Vec<_>>(),
        "n": x.n(),
        "p": x.p(),
        "seed": seed,
        "config": cfg,
    });
    write_json(&out.path("bootstrap.json"), &meta)?;
    Ok(out.done())
}

/// Runs the Monte-Carlo design and writes the long table `scores.csv`
/// (`dgp, method, n, alpha, score, succeeded, failed, min`) plus
/// `summary.json` with per-replication scores and failure messages.
pub fn cmd_experiment(cfg: &RunConfig) -> Result<CommandOutput> {
    let exp = cfg.experiment()?;
    log::info!("resolved config: {cfg:?}");
    let report = run_experiment(&exp)?;
    let flags = report.minimum_flags();

    let mut out = Out::new(cfg)?;
    let path = out.path("scores.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["dgp", "method", "n", "alpha", "score", "succeeded", "failed", "min"])?;
    for (c, min) in report.cells.iter().zip(&flags) {
        let score = c.mean_score().map_or_else(|| "NA".to_string(), |s| format!("{s}"));
        w.write_record([
            c.dgp.clone(),
            c.method.label().to_string(),
            c.n.to_string(),
            format!("{}", c.alpha),
            score,
            c.succeeded().to_string(),
            c.failures.len().to_string(),
            u8::from(*min).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let cells: Vec<_> = report
        .cells
        .iter()
        .zip(&flags)
        .map(|(c, min)| {
            json!({
                "dgp": c.dgp,
                "method": c.method.label(),
                "n": c.n,
                "alpha": c.alpha,
                "mean_score": c.mean_score(),
                "minimum": min,
                "scores": c.scores,
                "failures": c.failures,
            })
        })
        .collect();
    let meta = json!({
        "command": "experiment",
        "cells": cells,
        "truth_errors": report.truth_errors,
        "config": cfg,
    });
    write_json(&out.path("summary.json"), &meta)?;
    Ok(out.done())
}

/// Reshapes a delimited series into `sample.csv` and records dropped curves
/// in `ingest.json`.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<CommandOutput> {
    let spec = cfg.ingest_spec()?;
    log::info!("resolved config: {cfg:?}");
    let r = ingest(&spec)?;
    let mut out = Out::new(cfg)?;
    write_sample(&out.path("sample.csv"), &r.sample)?;
    let meta = json!({
        "command": "ingest",
        "n": r.sample.n(),
        "p": r.sample.p(),
        "dropped": r.dropped,
        "curve_labels": r.curve_labels,
        "config": cfg,
    });
    write_json(&out.path("ingest.json"), &meta)?;
    Ok(out.done())
}
