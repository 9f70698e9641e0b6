//! Functional principal component analysis on the quadrature inner product.
//!
//! The integral eigenproblem `int S(s,t) phi(t) dt = lambda phi(s)` is
//! discretized with the grid weights `W = diag(w)`: the symmetric matrix
//! `W^{1/2} S W^{1/2}` is diagonalized and its eigenvectors `v` are mapped
//! back as `phi = W^{-1/2} v`, which makes the eigenfunctions orthonormal
//! under [`crate::grid::l2_inner`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sample::{autocov_centered, center, sample_mean, FunctionalSample};
use crate::surface::CovSurface;

/// Relative asymmetry tolerated by [`eigendecompose`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues in decreasing order with eigenfunctions sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    eigenvalues: Vec<f64>,
    /// `p x K`, column `k` is `phi_k`.
    eigenfunctions: DMatrix<f64>,
    grid: Grid,
    /// Largest magnitude among negative eigenvalues that were set to zero.
    clamped: f64,
}

impl EigenDecomp {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfunctions(&self) -> &DMatrix<f64> {
        &self.eigenfunctions
    }

    pub fn eigenfunction(&self, k: usize) -> Vec<f64> {
        self.eigenfunctions.column(k).iter().copied().collect()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of retained components `K`.
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn clamped_magnitude(&self) -> f64 {
        self.clamped
    }

    /// Keeps the first `k` components.
    pub fn truncate(&self, k: usize) -> Self {
        let k = k.clamp(1, self.k());
        Self {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            eigenfunctions: self.eigenfunctions.columns(0, k).into_owned(),
            grid: self.grid.clone(),
            clamped: self.clamped,
        }
    }

    /// Smallest `K` whose eigenvalue sum reaches `ratio` of the total.
    pub fn components_for_ratio(&self, ratio: f64) -> usize {
        let total: f64 = self.eigenvalues.iter().sum();
        if !(total > 0.0) {
            return 1;
        }
        let target = ratio * total;
        let mut cum = 0.0;
        for (k, l) in self.eigenvalues.iter().enumerate() {
            cum += l;
            if cum >= target * (1.0 - 1e-12) {
                return k + 1;
            }
        }
        self.k()
    }
}

/// Principal component scores, `n x K` (row = curve, column = component).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    scores: DMatrix<f64>,
}

impl ScoreMatrix {
    pub fn new(scores: DMatrix<f64>) -> Result<Self> {
        if scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite score".into()));
        }
        Ok(Self { scores })
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        Self {
            scores: DMatrix::zeros(n, k),
        }
    }

    pub fn scores(&self) -> &DMatrix<f64> {
        &self.scores
    }

    pub fn n(&self) -> usize {
        self.scores.nrows()
    }

    pub fn k(&self) -> usize {
        self.scores.ncols()
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.scores.column(k).iter().copied().collect()
    }

    pub fn set_column(&mut self, k: usize, values: &[f64]) {
        self.scores.column_mut(k).copy_from_slice(values);
    }
}

/// Solves the discretized integral eigenproblem for the leading `k`
/// components.
///
/// Each eigenfunction is sign-normalized so that `int phi_k >= 0`; when the
/// integral vanishes the first nonzero value is made positive.
pub fn eigendecompose(s: &CovSurface, k: usize) -> Result<EigenDecomp> {
    let p = s.p();
    if k == 0 || k > p {
        return Err(Error::InvalidParameter(format!("need 1 <= K <= {p}, got {k}")));
    }
    let asym = s.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation: asym });
    }
    let grid = s.grid().clone();
    let w = grid.weights();
    if w.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidGrid("eigendecomposition needs positive weights".into()));
    }
    let sq: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let sv = s.values();
    // symmetrize exactly so the solver sees a symmetric input
    let m = DMatrix::from_fn(p, p, |i, j| 0.5 * (sv[(i, j)] + sv[(j, i)]) * sq[i] * sq[j]);
    let eig = SymmetricEigen::new(m);

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let lead = eig.eigenvalues[order[0]].max(0.0);
    let mut clamped = 0.0f64;
    let mut eigenvalues = Vec::with_capacity(k);
    let mut phis = DMatrix::zeros(p, k);
    for (col, &idx) in order.iter().take(k).enumerate() {
        let mut lam = eig.eigenvalues[idx];
        if lam < 0.0 {
            if lam < -1e-10 * lead.max(f64::MIN_POSITIVE) {
                log::debug!("clamping eigenvalue {lam:e} (leading {lead:e})");
            }
            clamped = clamped.max(-lam);
            lam = 0.0;
        }
        eigenvalues.push(lam);
        let mut phi: Vec<f64> = (0..p).map(|i| eig.eigenvectors[(i, idx)] / sq[i]).collect();
        orient(&mut phi, w);
        phis.column_mut(col).copy_from_slice(&phi);
    }
    Ok(EigenDecomp {
        eigenvalues,
        eigenfunctions: phis,
        grid,
        clamped,
    })
}

fn orient(phi: &mut [f64], w: &[f64]) {
    let integral: f64 = phi.iter().zip(w).map(|(a, b)| a * b).sum();
    let scale = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flip = if integral.abs() > 1e-12 * scale {
        integral < 0.0
    } else {
        phi.iter()
            .find(|v| v.abs() > 1e-12 * scale)
            .is_some_and(|v| *v < 0.0)
    };
    if flip {
        phi.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Scores `beta_{i,k} = <Xc_i, phi_k>`.
pub fn project_scores(xc: &FunctionalSample, e: &EigenDecomp) -> Result<ScoreMatrix> {
    if xc.grid() != e.grid() {
        return Err(Error::DimensionMismatch("sample and eigenfunctions use different grids".into()));
    }
    let w = DVector::from_column_slice(e.grid().weights());
    let weighted = DMatrix::from_fn(xc.p(), e.k(), |i, k| w[i] * e.eigenfunctions[(i, k)]);
    ScoreMatrix::new(xc.values() * weighted)
}

/// `mean + sum_k beta_{i,k} phi_k` for every row of `b`.
pub fn reconstruct(mean: &[f64], e: &EigenDecomp, b: &ScoreMatrix) -> Result<FunctionalSample> {
    let p = e.grid().len();
    if mean.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "mean has {} values, grid has {p} points",
            mean.len()
        )));
    }
    if b.k() != e.k() {
        return Err(Error::DimensionMismatch(format!(
            "{} score columns for {} eigenfunctions",
            b.k(),
            e.k()
        )));
    }
    let mut values = b.scores() * e.eigenfunctions().transpose();
    for (j, mut col) in values.column_iter_mut().enumerate() {
        col.iter_mut().for_each(|v| *v += mean[j]);
    }
    FunctionalSample::new(values, e.grid().clone())
}

/// Mean, decomposition of the lag-0 covariance and scores of a sample.
#[derive(Debug, Clone)]
pub struct Fpca {
    pub mean: Vec<f64>,
    pub decomp: EigenDecomp,
    pub scores: ScoreMatrix,
}

impl Fpca {
    /// Keeps `min(n - 1, p)` components, then truncates to the smallest
    /// count reaching `ratio` of the total variance (`ratio = 1` keeps all).
    pub fn fit(x: &FunctionalSample, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!("variance ratio {ratio} not in (0, 1]")));
        }
        let n = x.n();
        if n < 2 {
            return Err(Error::TooFewCurves);
        }
        let mean = sample_mean(x);
        let xc = center(x);
        let cov = autocov_centered(&xc, 0)?;
        let kmax = (n - 1).min(x.p());
        let mut decomp = eigendecompose(&cov, kmax)?;
        if ratio < 1.0 {
            decomp = decomp.truncate(decomp.components_for_ratio(ratio));
        }
        let scores = project_scores(&xc, &decomp)?;
        Ok(Self {
            mean,
            decomp,
            scores,
        })
    }

    pub fn reconstruct_with(&self, scores: &ScoreMatrix) -> Result<FunctionalSample> {
        reconstruct(&self.mean, &self.decomp, scores)
    }
}
