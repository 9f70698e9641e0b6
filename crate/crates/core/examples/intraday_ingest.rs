//! Fold a long half-hourly series into daily curves, dropping days with
//! gaps, then estimate the long-run covariance of the result.

use ftsboot::io::{ingest, ColumnRef, IngestSpec, MissingPolicy};
use ftsboot::prelude::*;
use std::fmt::Write as _;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let mut csv = String::from("stamp,load\n");
    for t in 0..48 * 30 {
        let hour = (t % 48) as f64 / 2.0;
        let day = (t / 48) as f64;
        let load = 50.0 + 10.0 * (std::f64::consts::PI * hour / 12.0).sin() + 2.0 * (1.7 * day).sin();
        let cell = if t == 48 * 7 + 13 { String::new() } else { format!("{load:.2}") };
        writeln!(csv, "{t},{cell}").unwrap();
    }
    let dir = std::env::temp_dir().join("ftsboot-intraday");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("load.csv");
    std::fs::write(&path, csv)?;

    let mut spec = IngestSpec::new(&path, ColumnRef::Name("load".into()), 48);
    spec.missing = MissingPolicy::DropWholeCurve;
    let res = ingest(&spec)?;
    println!("{} daily curves, dropped {:?}", res.sample.n(), res.dropped);
    let est = lrcov_estimate(&res.sample, &LrcovConfig::default())?;
    println!("HS norm of the long-run covariance {:.4}", hs_norm(&est));
    Ok(())
}
