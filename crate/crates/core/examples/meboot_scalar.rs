//! Maximum-entropy bootstrap of a scalar AR(1) series. Replicates keep the
//! rank order of the original, so they inherit its serial dependence.

use ftsboot::prelude::*;
use rand_distr::{Distribution, StandardNormal};

fn lag1(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    let num: f64 = x.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    num / x.iter().map(|v| (v - m).powi(2)).sum::<f64>()
}

fn main() -> ftsboot::Result<()> {
    let mut rng = ftsboot::rng::stream(3);
    let mut x = vec![0.0; 150];
    for t in 1..x.len() {
        let e: f64 = StandardNormal.sample(&mut rng);
        x[t] = 0.7 * x[t - 1] + e;
    }
    let reps = meboot_ensemble(&x, &MebootSpec::with_replicates(200), 9)?;
    let mut ac: Vec<f64> = reps.iter().map(|r| lag1(r)).collect();
    ac.sort_by(f64::total_cmp);
    println!("original lag-1 autocorrelation  {:.3}", lag1(&x));
    println!("replicate median                {:.3}", ac[ac.len() / 2]);
    println!("replicate 5%..95%               {:.3} .. {:.3}", ac[10], ac[189]);
    Ok(())
}
