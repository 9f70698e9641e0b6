use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ftsboot::io::{cmd_bootstrap, cmd_estimate, cmd_experiment, cmd_ingest, cmd_simulate, RunConfig};

#[derive(Parser)]
#[command(name = "ftsboot", version, about = "Bootstrap inference for functional long-run covariances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a FAR/FMA sample
    Simulate(Flags),
    /// Estimate the long-run covariance of a sample
    Estimate(Flags),
    /// Bootstrap confidence bands for the long-run covariance
    Bootstrap(Flags),
    /// Monte-Carlo comparison of bootstrap methods
    Experiment(Flags),
    /// Reshape a univariate series into curves
    Ingest(Flags),
}

#[derive(Args)]
struct Flags {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// iid | me | far | fkr
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    kernel: Option<String>,
    /// plugin or a positive number
    #[arg(long)]
    bandwidth: Option<String>,
    /// Comma-separated significance levels
    #[arg(long)]
    alpha: Option<String>,
    /// Pointwise band level
    #[arg(long)]
    level: Option<String>,
    #[arg(long)]
    replications: Option<String>,
    #[arg(long)]
    repetitions: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    input: Option<String>,
    /// Extra key=value overrides, applied last
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Flags {
    fn resolve(&self) -> ftsboot::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.apply("seed", &s.to_string())?;
        }
        let pairs = [
            ("method", &self.method),
            ("kernel", &self.kernel),
            ("bandwidth", &self.bandwidth),
            ("alphas", &self.alpha),
            ("level", &self.level),
            ("replications", &self.replications),
            ("repetitions", &self.repetitions),
            ("out", &self.out),
            ("input", &self.input),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.apply(k, v)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| ftsboot::Error::Config(format!("expected KEY=VALUE, got {kv:?}")))?;
            cfg.apply(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (flags, f): (&Flags, fn(&RunConfig) -> ftsboot::Result<_>) = match &cli.command {
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Estimate(a) => (a, cmd_estimate),
        Command::Bootstrap(a) => (a, cmd_bootstrap),
        Command::Experiment(a) => (a, cmd_experiment),
        Command::Ingest(a) => (a, cmd_ingest),
    };
    if !matches!(cli.command, Command::Simulate(_)) {
        eprintln!("note: all methods assume a stationary functional time series; test for stationarity first");
    }
    let cfg = flags.resolve()?;
    let out = f(&cfg)?;
    for p in &out.files {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e
                .chain()
                .find_map(|c| c.downcast_ref::<ftsboot::Error>())
                .map_or("other", ftsboot::Error::kind);
            // one line, whatever the message contains
            eprintln!("error: {kind}: {}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
