#![allow(dead_code)]

use std::f64::consts::PI;

use ftsboot::prelude::*;

/// Curves `Xc_w = R^w c0` on `span{f1, f2}` with `R` a rotation by
/// `2 pi / n`: a full period, so the sample mean is zero and the lag-one
/// relation holds exactly with operator `R`.
pub fn rotation_sample(n: usize, p: usize) -> FunctionalSample {
    let grid = Grid::unit(p).unwrap();
    let f1: Vec<f64> = grid.points().iter().map(|t| (2.0 * PI * t).sin()).collect();
    let f2: Vec<f64> = grid.points().iter().map(|t| (2.0 * PI * t).cos()).collect();
    let theta = 2.0 * PI / n as f64;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|w| {
            let (a, b) = ((w as f64 * theta).cos(), (w as f64 * theta).sin());
            f1.iter().zip(&f2).map(|(x, y)| a * x + b * y).collect()
        })
        .collect();
    FunctionalSample::from_rows(&rows, grid).unwrap()
}

/// `A, B, A, B, ...`: every predictor has exact copies whose responses
/// agree, so the leave-one-out kernel fit reproduces every response.
pub fn alternating_sample(n: usize, p: usize) -> FunctionalSample {
    let grid = Grid::unit(p).unwrap();
    let a: Vec<f64> = grid.points().iter().map(|t| 1.0 + t * t).collect();
    let b: Vec<f64> = grid.points().iter().map(|t| (3.0 * t).sin() - 0.5).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| if i % 2 == 0 { a.clone() } else { b.clone() }).collect();
    FunctionalSample::from_rows(&rows, grid).unwrap()
}

pub fn constant_sample(n: usize, p: usize) -> FunctionalSample {
    let grid = Grid::unit(p).unwrap();
    let c: Vec<f64> = grid.points().iter().map(|t| 2.0 - t).collect();
    FunctionalSample::from_rows(&vec![c; n], grid).unwrap()
}

pub fn max_abs_diff(a: &FunctionalSample, b: &FunctionalSample) -> f64 {
    (a.values() - b.values()).amax()
}

pub fn lag1_autocorr(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let den: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    let num: f64 = x.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    num / den
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Stable argsort.
pub fn ranks(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    idx
}
