//! A small Monte-Carlo table of mean interval scores, one row per
//! data-generating process and bootstrap method.

use ftsboot::prelude::*;

fn main() -> ftsboot::Result<()> {
    let dgps = vec![
        DgpSpec::fma(vec![0.5], 100, 21),
        DgpSpec::far(vec![0.5], 100, 21),
    ];
    let mut cfg = ExperimentConfig::new(dgps.clone(), 10, 49, 2024);
    cfg.alphas = vec![0.05];
    let report = run_experiment(&cfg)?;
    println!("{:<12} {:>8} {:>8} {:>8} {:>8}", "dgp", "iid", "me", "far", "fkr");
    for dgp in &dgps {
        let row: Vec<String> = MethodKind::ALL
            .iter()
            .map(|&m| report.mean(dgp, m, 0.05).map_or("NA".into(), |s| format!("{s:.3}")))
            .collect();
        println!("{:<12} {:>8} {:>8} {:>8} {:>8}", dgp.label(), row[0], row[1], row[2], row[3]);
    }
    Ok(())
}
