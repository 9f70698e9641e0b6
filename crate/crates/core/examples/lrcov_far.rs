//! Estimate the long-run covariance of a FAR(1) sample and compare it with
//! the closed-form surface as the series grows.

use ftsboot::prelude::*;

fn main() -> ftsboot::Result<()> {
    for n in [100, 400, 1600] {
        let spec = DgpSpec::far(vec![0.5], n, 21);
        let x = gen_dgp(&spec, 11)?;
        let pb = plugin_bandwidth(&x)?;
        let est = lrcov_estimate(&x, &LrcovConfig::default())?;
        let truth = theoretical_lrcov(&spec, x.grid())?;
        let rel = hs_norm(&truth.sub(&est)?) / hs_norm(&truth);
        println!("n = {n:5}  h = {:6.3}  relative HS error = {rel:.4}", pb.h);
    }
    Ok(())
}
