//! Pointwise band for the long-run covariance surface and an interval for
//! its HS estimation error, from each of the four bootstraps.

use ftsboot::prelude::*;

fn main() -> ftsboot::Result<()> {
    let spec = DgpSpec::far(vec![0.5], 100, 21);
    let x = gen_dgp(&spec, 21)?;
    let cfg = LrcovConfig::default();
    let est = lrcov_estimate(&x, &cfg)?;
    let truth = theoretical_lrcov(&spec, x.grid())?;
    println!("actual HS error {:.4}", hs_norm(&truth.sub(&est)?));
    for kind in MethodKind::ALL {
        let ens = run_bootstrap(&x, &BootstrapMethod::new(kind), 199, 4)?;
        let surfaces = bootstrap_lrcov_ensemble(&ens, &cfg, true)?;
        let iv = error_ci(&surfaces, &est, 0.05)?;
        let (lo, hi) = surface_ci(&surfaces, 0.95)?;
        let mid = x.p() / 2;
        println!(
            "{:>4}: error interval [{:.4}, {:.4}]  C(0.5, 0.5) band [{:.4}, {:.4}]",
            kind.to_string(),
            iv.lower,
            iv.upper,
            lo.get(mid, mid),
            hi.get(mid, mid)
        );
    }
    Ok(())
}
