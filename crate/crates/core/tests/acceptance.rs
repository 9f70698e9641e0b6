//! Acceptance suite: runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits nonzero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ftsboot::bootstrap::fkr_bootstrap;
use ftsboot::fpca::Fpca;
use ftsboot::io::{cmd_experiment, ingest, ColumnRef, IngestSpec, RunConfig};
use ftsboot::meboot::{me_intermediate_points, me_interval_means, MeDensity};
use ftsboot::prelude::*;
use ftsboot::rng;
use rand::Rng;

use common::*;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const ALPHAS: [f64; 3] = [0.05, 0.2, 0.5];
const MASTER_SEED: u64 = 20_240_601;

fn experiment(dgps: Vec<DgpSpec>, methods: &[MethodKind]) -> ScoreReport {
    let mut cfg = ExperimentConfig::new(dgps, 50, 199, MASTER_SEED);
    cfg.methods = methods.iter().map(|k| BootstrapMethod::new(*k)).collect();
    cfg.alphas = ALPHAS.to_vec();
    run_experiment(&cfg).expect("experiment runs")
}

fn mean_score(rep: &ScoreReport, dgp: &DgpSpec, m: MethodKind, a: f64) -> f64 {
    rep.mean(dgp, m, a).expect("cell has successful replications")
}

fn table1_ordering() -> Outcome {
    let dgp = DgpSpec::far(vec![0.5], 100, 21);
    let rep = experiment(vec![dgp.clone()], &MethodKind::ALL);
    let mut lines = Vec::new();
    let mut ok = true;
    for a in ALPHAS {
        let [iid, me, far, fkr] = MethodKind::ALL.map(|m| mean_score(&rep, &dgp, m, a));
        let ordered = far < fkr && fkr < me;
        let iid_far = iid > 10.0 * far;
        ok &= ordered && iid_far;
        lines.push(format!(
            "a={a}: iid {iid:.4} me {me:.4} far {far:.4} fkr {fkr:.4} (far<fkr<me: {ordered}, iid>10far: {iid_far})"
        ));
    }
    let detail = lines.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn table1_monotone_in_n() -> Outcome {
    let small = DgpSpec::far(vec![0.5], 100, 21);
    let large = small.with_n(200);
    let rep = experiment(vec![small.clone(), large.clone()], &[MethodKind::Far]);
    let mut lines = Vec::new();
    for a in ALPHAS {
        let s100 = mean_score(&rep, &small, MethodKind::Far, a);
        let s200 = mean_score(&rep, &large, MethodKind::Far, a);
        lines.push(format!("a={a}: n100 {s100:.4} n200 {s200:.4}"));
        ensure(s200 < s100, lines.join("; "))?;
    }
    Ok(lines.join("; "))
}

fn table1_dependence_trend() -> Outcome {
    let dgps: Vec<DgpSpec> = [1, 4, 8]
        .iter()
        .map(|&q| DgpSpec::fma(vec![0.5; q], 100, 21))
        .collect();
    let rep = experiment(dgps.clone(), &[MethodKind::Far]);
    let mut lines = Vec::new();
    for a in ALPHAS {
        let s: Vec<f64> = dgps.iter().map(|d| mean_score(&rep, d, MethodKind::Far, a)).collect();
        lines.push(format!("a={a}: {:.4} -> {:.4} -> {:.4}", s[0], s[1], s[2]));
        ensure(s[0] < s[1] && s[1] < s[2], lines.join("; "))?;
    }
    Ok(lines.join("; "))
}

fn lrcov_consistency() -> Outcome {
    let cfg = LrcovConfig::default();
    let median_error = |n: usize| {
        let spec = DgpSpec::far(vec![0.5], n, 21);
        let errs: Vec<f64> = (0..20u64)
            .map(|s| {
                let x = gen_dgp(&spec, rng::derive(77, s)).unwrap();
                let grid = x.grid().clone();
                let truth = CovSurface::from_fn(grid, |u, s| 4.0 * u.min(s)).unwrap();
                hs_norm(&truth.sub(&lrcov_estimate(&x, &cfg).unwrap()).unwrap())
            })
            .collect();
        median(errs)
    };
    let (d100, d500) = (median_error(100), median_error(500));
    let detail = format!("median D n=100 {d100:.4}, n=500 {d500:.4}");
    ensure(d500 < d100, detail.clone())?;
    Ok(detail)
}

fn estimator_oracle() -> Outcome {
    let rows = vec![vec![1.0, -0.5], vec![0.25, 2.0], vec![-3.0, 0.75]];
    let x = FunctionalSample::from_rows(&rows, Grid::unit(2).unwrap()).unwrap();
    let est = lrcov_estimate(&x, &LrcovConfig::fixed(WeightKernel::BARTLETT, 2.0)).unwrap();
    // C(u, s) = (1/n) sum_i sum_j max(0, 1 - |j - i| / h) xc_i(u) xc_j(s)
    let n = 3;
    let mean: Vec<f64> = (0..2).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / 3.0).collect();
    let mut worst: f64 = 0.0;
    for u in 0..2 {
        for s in 0..2 {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let lag = (j as f64 - i as f64).abs();
                    let w = (1.0 - lag / 2.0).max(0.0);
                    acc += w * (rows[i][u] - mean[u]) * (rows[j][s] - mean[s]);
                }
            }
            worst = worst.max((est.get(u, s) - acc / n as f64).abs());
        }
    }
    let detail = format!("max deviation from double-loop oracle {worst:.2e}");
    ensure(worst <= 1e-13, detail.clone())?;
    Ok(detail)
}

fn meboot_suite() -> Outcome {
    let spec = MebootSpec::default();
    let mut rng = rng::stream(5);
    let x: Vec<f64> = (0..50).map(|_| rng.random::<f64>() * 10.0 - 3.0).collect();

    // rank preservation
    let target = ranks(&x);
    for s in 0..50 {
        let r = meboot_replicate(&x, &spec, &mut rng::stream(s)).unwrap();
        ensure(ranks(&r) == target, format!("rank mismatch at seed {s}"))?;
    }
    // constant fixed point
    let c = vec![2.5; 12];
    for s in 0..10 {
        ensure(meboot_replicate(&c, &spec, &mut rng::stream(s)).unwrap() == c, "constant series moved")?;
    }
    // hand examples
    let inter = me_intermediate_points(&[4.0, 8.0, 12.0, 20.0], 0.0).unwrap();
    ensure(inter.m_trim == 16.0 / 3.0, format!("m_trim {}", inter.m_trim))?;
    ensure(
        inter.z[0] == 4.0 - 16.0 / 3.0 && inter.z[4] == 20.0 + 16.0 / 3.0,
        "tail knots",
    )?;
    let m = me_interval_means(&[4.0, 8.0, 12.0, 20.0]).unwrap();
    ensure(m == vec![5.0, 8.0, 13.0, 18.0], format!("interval means {m:?}"))?;
    // Monte-Carlo mean preservation
    let x20: Vec<f64> = x[..20].to_vec();
    let ens = meboot_ensemble(&x20, &MebootSpec::with_replicates(2000), 99).unwrap();
    let grand = ens.iter().flatten().sum::<f64>() / (20.0 * 2000.0);
    let mx = x20.iter().sum::<f64>() / 20.0;
    let sd = (x20.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / 19.0).sqrt();
    let bound = 3.0 * sd / (20.0f64 * 2000.0).sqrt() * 5.0;
    ensure(
        (grand - mx).abs() < bound,
        format!("grand mean off by {:.4} (bound {bound:.4})", (grand - mx).abs()),
    )?;
    // support before variance adjustment
    let density = MeDensity::new(&x, &spec).unwrap();
    let z = &density.intermediate().z;
    let (lo, hi) = (z[0], z[z.len() - 1]);
    for s in 0..200 {
        let raw = density.draw_raw(&mut rng::stream(s));
        ensure(raw.iter().all(|v| (lo..=hi).contains(v)), "raw draw outside [z0, zn]")?;
    }
    Ok(format!(
        "ranks, constant, hand examples exact; |grand mean - mean| = {:.4} < {bound:.4}",
        (grand - mx).abs()
    ))
}

fn fpca_suite() -> Outcome {
    let x = gen_dgp(&DgpSpec::far(vec![0.5], 60, 21), 3).unwrap();
    let grid = x.grid().clone();
    let w = grid.weights();
    let g0 = autocov(&x, 0).unwrap();
    let e = eigendecompose(&g0, 21).unwrap();
    let mut gram_err: f64 = 0.0;
    for a in 0..e.k() {
        for b in 0..e.k() {
            let (fa, fb) = (e.eigenfunction(a), e.eigenfunction(b));
            let ip: f64 = (0..w.len()).map(|j| w[j] * fa[j] * fb[j]).sum();
            gram_err = gram_err.max((ip - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    ensure(gram_err <= 1e-8, format!("Gram error {gram_err:.2e}"))?;

    let trace: f64 = (0..w.len()).map(|j| w[j] * g0.get(j, j)).sum();
    let lam: f64 = e.eigenvalues().iter().sum();
    let trace_rel = (lam - trace).abs() / trace;
    ensure(trace_rel <= 1e-8, format!("trace identity relative error {trace_rel:.2e}"))?;

    // data inside a three-dimensional span, reconstructed at full rank
    let basis: Vec<Vec<f64>> = (1..=3)
        .map(|k| grid.points().iter().map(|t| (k as f64 * 2.1 * t).cos() + t).collect())
        .collect();
    let mut r = rng::stream(8);
    let rows: Vec<Vec<f64>> = (0..10)
        .map(|_| {
            let a: Vec<f64> = (0..3).map(|_| r.random::<f64>() - 0.5).collect();
            (0..21).map(|j| 0.3 + (0..3).map(|k| a[k] * basis[k][j]).sum::<f64>()).collect()
        })
        .collect();
    let y = FunctionalSample::from_rows(&rows, grid.clone()).unwrap();
    let fit = Fpca::fit(&y, 1.0).unwrap();
    let recon = fit.reconstruct_with(&fit.scores).unwrap();
    let recon_err = max_abs_diff(&recon, &y);
    ensure(recon_err <= 1e-8, format!("reconstruction error {recon_err:.2e}"))?;

    let again = eigendecompose(&autocov(&x, 0).unwrap(), 21).unwrap();
    ensure(again == e, "repeat decomposition differs")?;
    Ok(format!(
        "Gram {gram_err:.1e}, trace {trace_rel:.1e}, reconstruction {recon_err:.1e}, repeat-run equal"
    ))
}

fn interval_score_suite() -> Outcome {
    for (l, u, d, a, want) in [
        (1.0, 2.0, 1.5, 0.3, 1.0),
        (1.0, 2.0, 3.0, 0.2, 11.0),
        (1.0, 2.0, 0.5, 0.05, 21.0),
    ] {
        let s = interval_score(l, u, d, a).unwrap();
        ensure((s - want).abs() <= 1e-12, format!("S({l},{u},{d},{a}) = {s}, want {want}"))?;
    }
    let mut r = rng::stream(4242);
    for _ in 0..10_000 {
        let l = r.random::<f64>() * 10.0 - 5.0;
        let u = l + r.random::<f64>() * 5.0;
        let d = r.random::<f64>() * 20.0 - 10.0;
        let a = r.random_range(1e-3..0.999);
        let s = interval_score(l, u, d, a).unwrap();
        let covered = l <= d && d <= u;
        ensure(s >= u - l, format!("score below width at ({l},{u},{d},{a})"))?;
        ensure((s == u - l) == covered, format!("equality/coverage mismatch at ({l},{u},{d},{a})"))?;
    }
    Ok("three evaluations exact, 10^4 fuzz cases hold".into())
}

fn degenerate_fixed_points() -> Outcome {
    let opts = BootstrapOptions::default();
    let x = rotation_sample(24, 21);
    let far = far_bootstrap(&x, 20, &opts, 1).unwrap();
    let far_err = far.samples.iter().map(|s| max_abs_diff(s, &x)).fold(0.0, f64::max);
    ensure(far_err <= 1e-6, format!("FAR replicate deviation {far_err:.2e}"))?;

    let y = alternating_sample(20, 21);
    let fkr = fkr_bootstrap(&y, 20, &opts, 1).unwrap();
    let fkr_err = fkr.samples.iter().map(|s| max_abs_diff(s, &y)).fold(0.0, f64::max);
    ensure(fkr_err <= 1e-8, format!("FKR replicate deviation {fkr_err:.2e}"))?;
    Ok(format!("FAR {far_err:.1e} <= 1e-6, FKR {fkr_err:.1e} <= 1e-8"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    for (k, v) in [
        ("seed", "11"),
        ("dgps", "far:0.5@40; fma:0.5x4@40"),
        ("replications", "4"),
        ("repetitions", "19"),
    ] {
        cfg.apply(k, v).unwrap();
    }
    cfg.apply("out", dir.path().to_str().unwrap()).unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    cmd_experiment(&cfg).unwrap();
    let (t1, s1) = (read("scores.csv"), read("summary.json"));
    cmd_experiment(&cfg).unwrap();
    let (t2, s2) = (read("scores.csv"), read("summary.json"));
    ensure(t1 == t2 && s1 == s2, "repeat runs differ")?;

    let mut exp = cfg.experiment().unwrap();
    exp.parallel = true;
    let par = run_experiment(&exp).unwrap();
    exp.parallel = false;
    let seq = run_experiment(&exp).unwrap();
    let bits = |r: &ScoreReport| -> Vec<u64> {
        r.cells
            .iter()
            .flat_map(|c| c.scores.iter().map(|s| s.map_or(u64::MAX, f64::to_bits)))
            .collect()
    };
    ensure(bits(&par) == bits(&seq), "parallel and sequential scores differ")?;
    Ok(format!("{} table bytes identical, {} scores bitwise equal", t1.len(), bits(&par).len()))
}

fn ingestion_contract() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pm10.csv");
    let mut text = String::from("timestamp,pm10\n");
    for i in 0..8736 {
        text.push_str(&format!("{}-{:02},{}\n", i / 48, i % 48, 20.0 + (i % 48) as f64 * 0.5));
    }
    std::fs::write(&path, text).unwrap();
    let mut spec = IngestSpec::new(&path, ColumnRef::Name("pm10".into()), 48);
    spec.timestamp_column = Some(ColumnRef::Name("timestamp".into()));
    let r = ingest(&spec).unwrap();
    ensure(
        r.sample.n() == 182 && r.sample.p() == 48,
        format!("got {} curves of {} points", r.sample.n(), r.sample.p()),
    )?;

    let short = dir.path().join("short.csv");
    std::fs::write(&short, "v\n".to_string() + &"1\n".repeat(10)).unwrap();
    let err = ingest(&IngestSpec::new(&short, ColumnRef::Index(0), 48)).unwrap_err();
    let msg = err.to_string();
    ensure(
        msg.contains("length 10 not divisible by period 48"),
        format!("unexpected message {msg:?}"),
    )?;
    Ok(format!("182 x 48 from 8736 rows; error {msg:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Table 1 ordering at desk scale", table1_ordering),
        ("Table 1 monotonicity in n", table1_monotone_in_n),
        ("Table 1 dependence-difficulty trend", table1_dependence_trend),
        ("long-run covariance consistency", lrcov_consistency),
        ("estimator oracle equivalence", estimator_oracle),
        ("ME bootstrap property suite", meboot_suite),
        ("FPCA suite", fpca_suite),
        ("interval-score formula", interval_score_suite),
        ("degenerate-residual fixed points", degenerate_fixed_points),
        ("determinism", determinism),
        ("ingestion contract", ingestion_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name} [{secs:.1}s]: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
