//! Functional principal components of a FAR(1) sample: eigenvalues, the
//! share of variance they explain, and the lag-1 autocorrelation of the
//! leading score series.

use ftsboot::fpca::Fpca;
use ftsboot::prelude::*;

fn main() -> ftsboot::Result<()> {
    let x = gen_dgp(&DgpSpec::far(vec![0.5], 200, 41), 5)?;
    let fit = Fpca::fit(&x, 0.95)?;
    let total = autocov(&x, 0)?.trace_integral();
    println!("{} components reach 95% of the variance", fit.decomp.k());
    let mut cum = 0.0;
    for (k, l) in fit.decomp.eigenvalues().iter().enumerate() {
        cum += l;
        println!("  lambda_{} = {l:.5}  cumulative {:.3}", k + 1, cum / total);
    }
    let s = fit.scores.column(0);
    let num: f64 = s.windows(2).map(|w| w[0] * w[1]).sum();
    let den: f64 = s.iter().map(|v| v * v).sum();
    println!("leading score lag-1 autocorrelation {:.3}", num / den);
    Ok(())
}
