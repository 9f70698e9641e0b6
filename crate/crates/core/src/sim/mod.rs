//! Simulation: Brownian-driven FAR/FMA processes, interval scores and the
//! Monte-Carlo comparison of bootstrap methods.

mod dgp;
mod experiment;
mod score;

pub use dgp::{brownian_path, gen_dgp, theoretical_lrcov, DgpFamily, DgpSpec};
pub use experiment::{run_experiment, ExperimentConfig, ScoreCell, ScoreReport};
pub use score::interval_score;
