use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rng;
use crate::sample::FunctionalSample;
use crate::surface::CovSurface;

/// Standard Brownian motion sampled on `grid` (which must lie in `[0, inf)`).
///
/// The increment up to the first point has variance `t_1`, so a path on a
/// grid starting at 0 starts at exactly 0.
pub fn brownian_path<R: Rng + ?Sized>(grid: &Grid, rng: &mut R) -> Vec<f64> {
    let mut prev_t = 0.0;
    let mut level = 0.0;
    grid.points()
        .iter()
        .map(|&t| {
            let dt = t - prev_t;
            if dt > 0.0 {
                let z: f64 = rng.sample(StandardNormal);
                level += dt.sqrt() * z;
            }
            prev_t = t;
            level
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgpFamily {
    /// `X_i = sum_j phi_j X_{i-j} + B_i`
    Far,
    /// `X_i = B_i + sum_j theta_j B_{i-j}`
    Fma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    pub family: DgpFamily,
    pub coefficients: Vec<f64>,
    pub n: usize,
    pub grid_size: usize,
    /// Discarded FAR draws after the zero initial curves.
    pub burn_in: usize,
}

impl DgpSpec {
    pub const DEFAULT_BURN_IN: usize = 100;
    pub const DEFAULT_GRID_SIZE: usize = 21;

    pub fn far(coefficients: Vec<f64>, n: usize, grid_size: usize) -> Self {
        Self {
            family: DgpFamily::Far,
            coefficients,
            n,
            grid_size,
            burn_in: Self::DEFAULT_BURN_IN,
        }
    }

    pub fn fma(coefficients: Vec<f64>, n: usize, grid_size: usize) -> Self {
        Self {
            family: DgpFamily::Fma,
            coefficients,
            n,
            grid_size,
            burn_in: 0,
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Compact model name, e.g. `FAR_0.5(1)` or `FAR_(-0.6,0.09)(2)`.
    pub fn label(&self) -> String {
        let fam = match self.family {
            DgpFamily::Far => "FAR",
            DgpFamily::Fma => "FMA",
        };
        let c = &self.coefficients;
        let coef = if !c.is_empty() && c.iter().all(|v| *v == c[0]) {
            format!("{}", c[0])
        } else {
            let parts: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
            format!("({})", parts.join(","))
        };
        format!("{fam}_{coef}({})", c.len())
    }

    /// `true` when the FAR coefficients satisfy `sum |phi_j| < 1`.
    pub fn is_stable(&self) -> bool {
        match self.family {
            DgpFamily::Far => self.coefficients.iter().map(|v| v.abs()).sum::<f64>() < 1.0,
            DgpFamily::Fma => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coefficients.is_empty() {
            return Err(Error::InvalidParameter("DGP needs at least one coefficient".into()));
        }
        if self.coefficients.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite DGP coefficient".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n = {} < 2", self.n)));
        }
        if self.grid_size < 2 {
            return Err(Error::InvalidParameter(format!("grid size {} < 2", self.grid_size)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::unit(self.grid_size)
    }
}

impl std::str::FromStr for DgpSpec {
    type Err = Error;

    /// `far:0.5`, `far:-0.6,0.09`, `fma:0.5x4` (four coefficients of 0.5),
    /// optionally followed by `@n`. Defaults: `n = 100`, 21 grid points.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse DGP {s:?}"));
        let (body, n) = match s.split_once('@') {
            Some((b, n)) => (b, n.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 100),
        };
        let (fam, coefs) = body.split_once(':').ok_or_else(bad)?;
        let coefficients = if let Some((v, k)) = coefs.split_once('x') {
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            vec![v; k]
        } else {
            coefs
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        let spec = match fam.trim().to_ascii_lowercase().as_str() {
            "far" => Self::far(coefficients, n, Self::DEFAULT_GRID_SIZE),
            "fma" => Self::fma(coefficients, n, Self::DEFAULT_GRID_SIZE),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Simulates `spec.n` curves on `spec.grid_size` equispaced points in
/// `[0, 1]`, deterministically from `seed`.
pub fn gen_dgp(spec: &DgpSpec, seed: u64) -> Result<FunctionalSample> {
    spec.validate()?;
    if !spec.is_stable() {
        log::warn!("{}: sum |phi| >= 1, the process may not be stationary", spec.label());
    }
    let grid = spec.grid()?;
    let p = grid.len();
    let n = spec.n;
    let q = spec.order();
    let mut rng = rng::stream(seed);
    let values = match spec.family {
        DgpFamily::Fma => {
            let noise: Vec<Vec<f64>> = (0..q + n).map(|_| brownian_path(&grid, &mut rng)).collect();
            DMatrix::from_fn(n, p, |i, t| {
                let now = q + i;
                noise[now][t]
                    + spec
                        .coefficients
                        .iter()
                        .enumerate()
                        .map(|(j, th)| th * noise[now - j - 1][t])
                        .sum::<f64>()
            })
        }
        DgpFamily::Far => {
            let total = spec.burn_in + n;
            let mut hist: Vec<Vec<f64>> = vec![vec![0.0; p]; q];
            for _ in 0..total {
                let b = brownian_path(&grid, &mut rng);
                let len = hist.len();
                let next: Vec<f64> = (0..p)
                    .map(|t| {
                        b[t] + spec
                            .coefficients
                            .iter()
                            .enumerate()
                            .map(|(j, ph)| ph * hist[len - 1 - j][t])
                            .sum::<f64>()
                    })
                    .collect();
                hist.push(next);
            }
            let start = hist.len() - n;
            DMatrix::from_fn(n, p, |i, t| hist[start + i][t])
        }
    };
    FunctionalSample::new(values, grid)
}

/// `psi^2 min(u, s)` where `psi` is the sum of the MA(inf) coefficients:
/// `1 + sum theta` for FMA and `1 / (1 - sum phi)` for FAR.
pub fn theoretical_lrcov(spec: &DgpSpec, grid: &Grid) -> Result<CovSurface> {
    let total: f64 = spec.coefficients.iter().sum();
    let psi = match spec.family {
        DgpFamily::Fma => 1.0 + total,
        DgpFamily::Far => {
            let gap = 1.0 - total;
            if gap.abs() < 1e-8 {
                return Err(Error::UnitRoot(gap));
            }
            1.0 / gap
        }
    };
    let c = psi * psi;
    CovSurface::from_fn(grid.clone(), |u, s| c * u.min(s))
}
