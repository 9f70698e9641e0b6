//! `key = value` run configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::ingest::{ColumnRef, IngestSpec, MissingPolicy};
use crate::bootstrap::{BootstrapMethod, BootstrapOptions, MethodKind};
use crate::error::{Error, Result};
use crate::lrcov::{Bandwidth, LrcovConfig};
use crate::sim::{DgpSpec, ExperimentConfig};

/// Fully resolved parameters of one invocation.
///
/// Files hold one `key = value` pair per line; `#` starts a comment and
/// blank lines are ignored. Command-line flags are applied afterwards
/// through the same [`RunConfig::apply`], so they override the file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    /// DGP for `simulate`; the first of `dgps` is used when unset.
    pub dgp: DgpSpec,
    pub dgps: Vec<DgpSpec>,
    /// Overrides the sample size of every DGP.
    pub n: Option<usize>,
    pub grid_size: usize,
    pub method: MethodKind,
    pub methods: Vec<MethodKind>,
    pub lrcov: LrcovConfig,
    pub alphas: Vec<f64>,
    pub level: f64,
    pub replications: usize,
    pub repetitions: usize,
    pub options: BootstrapOptions,
    pub column: ColumnRef,
    pub period: usize,
    pub timestamp_column: Option<ColumnRef>,
    pub missing: MissingPolicy,
    pub has_header: bool,
    pub grid_span: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let far = DgpSpec::far(vec![0.5], 100, DgpSpec::DEFAULT_GRID_SIZE);
        Self {
            seed: None,
            input: None,
            out: PathBuf::from("."),
            dgp: far.clone(),
            dgps: vec![far],
            n: None,
            grid_size: DgpSpec::DEFAULT_GRID_SIZE,
            method: MethodKind::Far,
            methods: MethodKind::ALL.to_vec(),
            lrcov: LrcovConfig::default(),
            alphas: vec![0.05, 0.2, 0.5],
            level: 0.8,
            replications: 50,
            repetitions: 199,
            options: BootstrapOptions::default(),
            column: ColumnRef::Index(0),
            period: 48,
            timestamp_column: None,
            missing: MissingPolicy::Error,
            has_header: true,
            grid_span: None,
        }
    }
}

fn list<T: std::str::FromStr>(value: &str, sep: char) -> std::result::Result<Vec<T>, T::Err> {
    value
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("invalid value {value:?} for {key}"))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_file(path)?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_str(&text)
    }

    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.apply(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Sets one parameter. Unknown keys are rejected.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let e = || bad(key, value);
        match key {
            "seed" => self.seed = Some(value.parse().map_err(|_| e())?),
            "input" => self.input = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "dgp" => {
                self.dgp = value.parse()?;
                self.dgps = vec![self.dgp.clone()];
            }
            "dgps" => {
                self.dgps = list(value, ';')?;
                if let Some(first) = self.dgps.first() {
                    self.dgp = first.clone();
                }
            }
            "n" => self.n = Some(value.parse().map_err(|_| e())?),
            "grid_size" => self.grid_size = value.parse().map_err(|_| e())?,
            "method" => self.method = value.parse()?,
            "methods" => self.methods = list(value, ',')?,
            "kernel" => self.lrcov.kernel = value.parse()?,
            "bandwidth" => self.lrcov.bandwidth = value.parse::<Bandwidth>()?,
            "alpha" | "alphas" => self.alphas = list(value, ',').map_err(|_| e())?,
            "level" => self.level = value.parse().map_err(|_| e())?,
            "replications" => self.replications = value.parse().map_err(|_| e())?,
            "repetitions" => self.repetitions = value.parse().map_err(|_| e())?,
            "trim" => self.options.meboot.trim_proportion = value.parse().map_err(|_| e())?,
            "adjust_variance" => self.options.meboot.adjust_variance = value.parse().map_err(|_| e())?,
            "far_regularization" => self.options.far_regularization = value.parse().map_err(|_| e())?,
            "fkr_bandwidth_quantile" => {
                self.options.fkr_bandwidth_quantile = value.parse().map_err(|_| e())?
            }
            "fpca_ratio" => self.options.fpca_ratio = value.parse().map_err(|_| e())?,
            "parallel" => self.options.parallel = value.parse().map_err(|_| e())?,
            "column" => self.column = value.parse()?,
            "period" => self.period = value.parse().map_err(|_| e())?,
            "timestamp_column" => self.timestamp_column = Some(value.parse()?),
            "missing" => self.missing = value.parse()?,
            "has_header" => self.has_header = value.parse().map_err(|_| e())?,
            "grid_span" => self.grid_span = Some(value.parse().map_err(|_| e())?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required for this command".into()))
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::Config("an input file is required for this command".into()))
    }

    fn resolve_dgp(&self, d: &DgpSpec) -> DgpSpec {
        let mut d = d.clone();
        if let Some(n) = self.n {
            d.n = n;
        }
        d.grid_size = self.grid_size;
        d
    }

    pub fn simulation_dgp(&self) -> DgpSpec {
        self.resolve_dgp(&self.dgp)
    }

    pub fn method(&self) -> BootstrapMethod {
        BootstrapMethod {
            kind: self.method,
            options: self.options,
        }
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let cfg = ExperimentConfig {
            dgps: self.dgps.iter().map(|d| self.resolve_dgp(d)).collect(),
            methods: self
                .methods
                .iter()
                .map(|&kind| BootstrapMethod {
                    kind,
                    options: self.options,
                })
                .collect(),
            replications: self.replications,
            repetitions: self.repetitions,
            alphas: self.alphas.clone(),
            master_seed: self.require_seed()?,
            lrcov: self.lrcov,
            parallel: self.options.parallel,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn ingest_spec(&self) -> Result<IngestSpec> {
        let mut spec = IngestSpec::new(self.require_input()?, self.column.clone(), self.period);
        spec.timestamp_column = self.timestamp_column.clone();
        spec.missing = self.missing;
        spec.has_header = self.has_header;
        spec.grid_span = self.grid_span;
        Ok(spec)
    }
}
