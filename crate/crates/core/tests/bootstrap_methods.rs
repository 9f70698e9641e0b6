mod common;

use ftsboot::bootstrap::{fkr_fit, ScoreResampler};
use ftsboot::fpca::{project_scores, Fpca};
use ftsboot::grid::l2_distance;
use ftsboot::prelude::*;
use ftsboot::rng;

use common::*;

fn opts() -> BootstrapOptions {
    BootstrapOptions::default()
}

fn far_data(n: usize, seed: u64) -> FunctionalSample {
    gen_dgp(&DgpSpec::far(vec![0.5], n, 21), seed).unwrap()
}

/// Score matrix of `y` on the original decomposition.
fn scores_on(fit: &Fpca, y: &FunctionalSample) -> ScoreMatrix {
    let rows: Vec<Vec<f64>> = y
        .curves()
        .map(|c| c.iter().zip(&fit.mean).map(|(a, m)| a - m).collect())
        .collect();
    let yc = FunctionalSample::from_rows(&rows, y.grid().clone()).unwrap();
    project_scores(&yc, &fit.decomp).unwrap()
}

#[test]
fn constant_input_is_returned_by_every_method() {
    let x = constant_sample(12, 9);
    for kind in MethodKind::ALL {
        let ens = run_bootstrap(&x, &BootstrapMethod::new(kind), 6, 3).unwrap();
        assert_eq!(ens.len(), 6);
        for s in &ens.samples {
            assert!(max_abs_diff(s, &x) <= 1e-12, "{kind}");
        }
    }
}

#[test]
fn ensembles_keep_shape_and_grid() {
    let x = far_data(30, 1);
    for kind in MethodKind::ALL {
        let ens = run_bootstrap(&x, &BootstrapMethod::new(kind), 7, 2).unwrap();
        assert_eq!(ens.len(), 7);
        assert_eq!(ens.method, kind);
        for s in &ens.samples {
            assert_eq!((s.n(), s.p()), (30, 21));
            assert_eq!(s.grid(), x.grid());
        }
    }
}

#[test]
fn iid_replicate_scores_come_from_original_columns() {
    let x = far_data(25, 4);
    let fit = Fpca::fit(&x, 1.0).unwrap();
    let ens = iid_bootstrap(&x, 5, &opts(), 8).unwrap();
    for s in &ens.samples {
        let sc = scores_on(&fit, s);
        for k in 0..3 {
            let orig = fit.scores.column(k);
            for v in sc.column(k) {
                let nearest = orig.iter().map(|o| (o - v).abs()).fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-9, "score {v} not in column {k}");
            }
        }
    }
}

#[test]
fn iid_replicate_means_converge() {
    let x = far_data(40, 6);
    let b = 500;
    let ens = iid_bootstrap(&x, b, &opts(), 12).unwrap();
    let mean = sample_mean(&x);
    let p = x.p();
    let n = x.n() as f64;
    for j in 1..p {
        let col: Vec<f64> = (0..x.n()).map(|i| x.get(i, j)).collect();
        let sd = (col.iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let grand = ens.samples.iter().map(|s| sample_mean(s)[j]).sum::<f64>() / b as f64;
        let bound = 3.0 * (sd / (n * b as f64).sqrt() * 5.0);
        assert!((grand - mean[j]).abs() < bound, "t = {j}: {grand} vs {}", mean[j]);
    }
}

#[test]
fn me_score_columns_keep_their_ranks() {
    let x = far_data(40, 2);
    let resampler = ScoreResampler::new(&x, &opts()).unwrap();
    let fit = resampler.fpca();
    for rep in 0..5 {
        let y = resampler.replicate(77, rep).unwrap();
        let sc = scores_on(fit, &y);
        for k in 0..4 {
            assert_eq!(ranks(&sc.column(k)), ranks(&fit.scores.column(k)), "rep {rep} column {k}");
        }
    }
}

#[test]
fn serial_dependence_destroyed_by_iid_kept_by_me() {
    let mut iid_ac = Vec::new();
    let mut me_gap = Vec::new();
    for seed in 0..8u64 {
        let x = far_data(200, rng::derive(31, seed));
        let fit = Fpca::fit(&x, 1.0).unwrap();
        let original = lag1_autocorr(&fit.scores.column(0));
        let iid = iid_bootstrap(&x, 100, &opts(), seed).unwrap();
        let me = me_score_bootstrap(&x, 100, &opts(), seed).unwrap();
        iid_ac.push(median(iid.samples.iter().map(|s| lag1_autocorr(&scores_on(&fit, s).column(0))).collect()));
        let me_med = median(me.samples.iter().map(|s| lag1_autocorr(&scores_on(&fit, s).column(0))).collect());
        me_gap.push(me_med - original);
    }
    let iid_med = median(iid_ac);
    let me_med = median(me_gap);
    assert!(iid_med.abs() < 0.1, "IID lag-1 autocorrelation {iid_med}");
    assert!(me_med.abs() < 0.15, "ME lag-1 gap {me_med}");
}

#[test]
fn me_score_tracks_dependence_at_full_size() {
    let x = far_data(200, 5);
    let fit = Fpca::fit(&x, 1.0).unwrap();
    let ens = me_score_bootstrap(&x, 500, &opts(), 21).unwrap();
    let original = lag1_autocorr(&fit.scores.column(0));
    let med = median(ens.samples.iter().map(|s| lag1_autocorr(&scores_on(&fit, s).column(0))).collect());
    assert!((med - original).abs() < 0.15, "{med} vs {original}");
}

#[test]
fn far_fit_recovers_rotation_exactly() {
    let x = rotation_sample(30, 21);
    let fit = far1_fit(&x, 0.85).unwrap();
    assert_eq!(fit.retained_components, 2);
    for w in 1..30 {
        let pred = fit.apply(&x.curve(w - 1));
        let err = pred.iter().zip(x.curve(w)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "w = {w}: {err}");
    }
    let resid = far1_residuals(&x, &fit).unwrap();
    assert!(resid.values().amax() < 1e-6);
}

#[test]
fn far_residuals_are_centered() {
    let x = far_data(50, 9);
    let fit = far1_fit(&x, 0.85).unwrap();
    let resid = far1_residuals(&x, &fit).unwrap();
    assert_eq!(resid.n(), 49);
    assert!(sample_mean(&resid).iter().all(|v| v.abs() < 1e-10));
}

#[test]
fn far_operator_small_on_white_noise() {
    // n = 500: estimation noise in the operator decays like n^{-1/2}, and at
    // n = 100 white noise alone gives roughly a third of the FAR norm
    let n = 500;
    let norm = |spec: DgpSpec| {
        median(
            (0..50u64)
                .map(|s| {
                    let x = gen_dgp(&spec, rng::derive(3, s)).unwrap();
                    let fit = far1_fit(&x, 0.85).unwrap();
                    hs_norm(&CovSurface::new(fit.rho_matrix.clone(), x.grid().clone()).unwrap())
                })
                .collect(),
        )
    };
    let white = norm(DgpSpec::fma(vec![0.0], n, 21));
    let far = norm(DgpSpec::far(vec![0.5], n, 21));
    assert!(white < 0.3 * far, "white {white} vs far {far}");
}

#[test]
fn far_bootstrap_needs_three_curves() {
    let x = far_data(2, 1);
    assert!(far_bootstrap(&x, 3, &opts(), 1).is_err());
    assert!(fkr_bootstrap(&x, 3, &opts(), 1).is_err());
}

#[test]
fn fkr_fits_are_convex_combinations() {
    let x = far_data(40, 13);
    let fitted = fkr_predict(&x, 0.2).unwrap();
    assert_eq!(fitted.n(), 39);
    for j in 0..x.p() {
        let resp: Vec<f64> = (1..40).map(|i| x.get(i, j)).collect();
        let lo = resp.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = resp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for i in 0..39 {
            let v = fitted.get(i, j);
            assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }
}

#[test]
fn fkr_bandwidth_is_pairwise_distance_quantile() {
    let x = far_data(25, 17);
    let curves: Vec<Vec<f64>> = x.curves().collect();
    let mut d = Vec::new();
    for i in 0..24 {
        for j in (i + 1)..24 {
            d.push(l2_distance(&curves[i], &curves[j], x.grid()).unwrap());
        }
    }
    assert_eq!(d.len(), 24 * 23 / 2);
    d.sort_by(f64::total_cmp);
    let pos = 0.2 * (d.len() - 1) as f64;
    let (lo, frac) = (pos.floor() as usize, pos.fract());
    let oracle = d[lo] + frac * (d[lo + 1] - d[lo]);
    let fit = fkr_fit(&x, 0.2).unwrap();
    assert!((fit.bandwidth - oracle).abs() < 1e-12);
}

#[test]
fn fkr_zero_residuals_reproduce_sample() {
    let x = alternating_sample(16, 11);
    let ens = fkr_bootstrap(&x, 10, &opts(), 4).unwrap();
    for s in &ens.samples {
        assert!(max_abs_diff(s, &x) <= 1e-8);
    }
}

#[test]
fn surface_ensembles_and_bands() {
    let x = far_data(60, 23);
    let ens = run_bootstrap(&x, &BootstrapMethod::new(MethodKind::Far), 40, 5).unwrap();
    let surfaces = bootstrap_lrcov_ensemble(&ens, &LrcovConfig::default(), true).unwrap();
    for s in &surfaces.surfaces {
        assert!(s.is_symmetric(1e-12));
        let h = hs_norm(s);
        assert!(h.is_finite() && h > 0.0);
    }
    let (lo80, hi80) = surface_ci(&surfaces, 0.8).unwrap();
    let (lo95, hi95) = surface_ci(&surfaces, 0.95).unwrap();
    for u in 0..21 {
        for s in 0..21 {
            assert!(lo80.get(u, s) <= hi80.get(u, s));
            assert!(lo95.get(u, s) <= lo80.get(u, s) && hi80.get(u, s) <= hi95.get(u, s));
        }
    }
    let est = lrcov_estimate(&x, &LrcovConfig::default()).unwrap();
    let wide = error_ci(&surfaces, &est, 0.05).unwrap();
    let narrow = error_ci(&surfaces, &est, 0.5).unwrap();
    assert!(wide.lower <= narrow.lower && narrow.upper <= wide.upper);
}

#[test]
fn single_replicate_surface_matches_direct_estimate() {
    let x = far_data(30, 3);
    let ens = me_score_bootstrap(&x, 1, &opts(), 9).unwrap();
    let cfg = LrcovConfig::default();
    let surfaces = bootstrap_lrcov_ensemble(&ens, &cfg, false).unwrap();
    assert_eq!(surfaces.surfaces[0], lrcov_estimate(&ens.samples[0], &cfg).unwrap());
}

#[test]
fn bootstrap_is_a_function_of_its_seed() {
    let x = far_data(30, 3);
    for kind in MethodKind::ALL {
        let m = BootstrapMethod::new(kind);
        let a = run_bootstrap(&x, &m, 4, 10).unwrap();
        let b = run_bootstrap(&x, &m, 4, 10).unwrap();
        let c = run_bootstrap(&x, &m, 4, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c, "{kind}");
    }
}
