//! Maximum-entropy bootstrap for a single real-valued series.
//!
//! Replicates are drawn from a density built on the order statistics of the
//! series and then put back into the time order of the original ranks, so
//! each replicate keeps the rank pattern (and hence much of the serial
//! dependence) of the data.
//!
//! Construction:
//!
//! 1. sort the series, remembering each order statistic's time index;
//! 2. interior knots `z_i` are midpoints of consecutive order statistics;
//! 3. the tails are `z_0 = x_(1) - m` and `z_n = x_(n) + m` with `m` the
//!    trimmed mean of `|x_t - x_{t-1}|`;
//! 4. interval `i` carries mass `1/n` and has mean `m_i` (weights
//!    `3/4, 1/4` at the ends and `1/4, 1/2, 1/4` inside);
//! 5. uniform draws are mapped through the piecewise quantile function and
//!    sorted;
//! 6. the sorted draws are assigned to the time positions of the order
//!    statistics;
//! 7. optionally, the replicate is rescaled about the sample mean so the
//!    generating density has the sample's variance.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MebootSpec {
    /// Fraction trimmed from each end when averaging absolute consecutive
    /// differences, in `[0, 0.5)`.
    pub trim_proportion: f64,
    pub adjust_variance: bool,
    pub replicates: usize,
}

impl Default for MebootSpec {
    fn default() -> Self {
        Self {
            trim_proportion: 0.10,
            adjust_variance: true,
            replicates: 1,
        }
    }
}

impl MebootSpec {
    pub fn with_replicates(replicates: usize) -> Self {
        Self {
            replicates,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.trim_proportion >= 0.0 && self.trim_proportion < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "trim proportion {} not in [0, 0.5)",
                self.trim_proportion
            )));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("need at least one replicate".into()));
        }
        Ok(())
    }
}

/// Order statistics, their time positions and the knots `z_0..z_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Intermediate {
    pub order_stats: Vec<f64>,
    /// `order_index[k]` is the time position of the `k`-th smallest value.
    pub order_index: Vec<usize>,
    pub z: Vec<f64>,
    pub m_trim: f64,
}

fn check_len(x: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("series contains non-finite values".into()));
    }
    Ok(())
}

/// Trimmed mean with `floor(len * trim)` values dropped from each end.
pub fn trimmed_mean(values: &[f64], trim: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let cut = (v.len() as f64 * trim).floor() as usize;
    let kept = &v[cut..v.len() - cut];
    kept.iter().sum::<f64>() / kept.len() as f64
}

/// Steps 1-3: sorting, midpoints and trimmed tail extensions.
pub fn me_intermediate_points(x: &[f64], trim_proportion: f64) -> Result<Intermediate> {
    check_len(x)?;
    if !(0.0..0.5).contains(&trim_proportion) {
        return Err(Error::InvalidParameter(format!(
            "trim proportion {trim_proportion} not in [0, 0.5)"
        )));
    }
    let n = x.len();
    let mut order_index: Vec<usize> = (0..n).collect();
    // stable: ties keep first-occurrence order
    order_index.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let order_stats: Vec<f64> = order_index.iter().map(|&i| x[i]).collect();

    let diffs: Vec<f64> = x.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let m_trim = trimmed_mean(&diffs, trim_proportion);

    let mut z = Vec::with_capacity(n + 1);
    z.push(order_stats[0] - m_trim);
    z.extend(order_stats.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    z.push(order_stats[n - 1] + m_trim);
    Ok(Intermediate {
        order_stats,
        order_index,
        z,
        m_trim,
    })
}

/// Step 4: interval means from sorted order statistics.
pub fn me_interval_means(order_stats: &[f64]) -> Result<Vec<f64>> {
    check_len(order_stats)?;
    let n = order_stats.len();
    let x = order_stats;
    let mut m = Vec::with_capacity(n);
    m.push(0.75 * x[0] + 0.25 * x[1]);
    for k in 1..n - 1 {
        m.push(0.25 * x[k - 1] + 0.5 * x[k] + 0.25 * x[k + 1]);
    }
    m.push(0.25 * x[n - 2] + 0.75 * x[n - 1]);
    Ok(m)
}

/// The fitted maximum-entropy density of one series, reusable across draws.
#[derive(Debug, Clone)]
pub struct MeDensity {
    inter: Intermediate,
    /// Additive shift per interval so its mean matches `m_i`.
    shift: Vec<f64>,
    mean: f64,
    /// Variance rescale factor (1 when adjustment is off or degenerate).
    scale: f64,
}

impl MeDensity {
    pub fn new(x: &[f64], spec: &MebootSpec) -> Result<Self> {
        spec.validate()?;
        let inter = me_intermediate_points(x, spec.trim_proportion)?;
        let means = me_interval_means(&inter.order_stats)?;
        let shift: Vec<f64> = means
            .iter()
            .enumerate()
            .map(|(i, m)| m - 0.5 * (inter.z[i] + inter.z[i + 1]))
            .collect();
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let mut density = Self {
            inter,
            shift,
            mean,
            scale: 1.0,
        };
        // a degenerate support keeps the replicate exactly constant; the
        // rounded sample mean would otherwise leak into the rescale
        let degenerate = density.inter.z[0] == density.inter.z[x.len()];
        if spec.adjust_variance && !degenerate {
            let sample_var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let (dm, dv) = density.moments();
            // rescaling happens about the sample mean, so match the second
            // moment about that point
            let spread = dv + (dm - mean).powi(2);
            if spread > 0.0 && sample_var > 0.0 {
                density.scale = (sample_var / spread).sqrt();
            }
        }
        Ok(density)
    }

    pub fn intermediate(&self) -> &Intermediate {
        &self.inter
    }

    pub fn n(&self) -> usize {
        self.inter.order_stats.len()
    }

    /// Rescale factor applied about the sample mean.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sample_mean(&self) -> f64 {
        self.mean
    }

    /// Maps a uniform draw to the unadjusted density: interval `floor(u n)`,
    /// linear within it, then shifted so the interval mean is `m_i`.
    ///
    /// Only the two tail intervals have a nonzero shift (`+-m_trim / 2`),
    /// which keeps every value inside `[z_0, z_n]`; the final clamp to that
    /// support never binds in exact arithmetic. The map is not monotone
    /// across the tail boundaries, which is harmless because draws are
    /// sorted before reordering.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.n();
        let pos = u.clamp(0.0, 1.0) * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let local = pos - i as f64;
        let lo = self.inter.z[i];
        let hi = self.inter.z[i + 1];
        (lo + local * (hi - lo) + self.shift[i]).clamp(self.inter.z[0], self.inter.z[n])
    }

    /// Mean and variance of the unadjusted density (exact, including any
    /// probability mass piled up by the support clamp).
    pub fn moments(&self) -> (f64, f64) {
        let n = self.n();
        let (z0, zn) = (self.inter.z[0], self.inter.z[n]);
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for i in 0..n {
            let lo = self.inter.z[i];
            let hi = self.inter.z[i + 1];
            let (a, b) = clamped_uniform_moments(lo + self.shift[i], hi - lo, z0, zn);
            m1 += a;
            m2 += b;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        (m1, (m2 - m1 * m1).max(0.0))
    }

    /// Steps 5-6 without variance adjustment: values lie in `[z_0, z_n]`.
    pub fn draw_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n();
        let mut q: Vec<f64> = (0..n).map(|_| self.quantile(rng.random::<f64>())).collect();
        q.sort_by(f64::total_cmp);
        let mut out = vec![0.0; n];
        for (k, &t) in self.inter.order_index.iter().enumerate() {
            out[t] = q[k];
        }
        out
    }

    /// One replicate, variance-adjusted when configured.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = self.draw_raw(rng);
        if self.scale != 1.0 {
            for v in &mut out {
                *v = self.mean + self.scale * (*v - self.mean);
            }
        }
        out
    }
}

/// First two raw moments of `clamp(a + len * U, lo, hi)` with `U ~ U[0,1]`.
fn clamped_uniform_moments(a: f64, len: f64, lo: f64, hi: f64) -> (f64, f64) {
    if len <= 0.0 {
        let v = a.clamp(lo, hi);
        return (v, v * v);
    }
    let b = a + len;
    // probability mass below lo and above hi
    let p_lo = ((lo - a) / len).clamp(0.0, 1.0);
    let p_hi = ((b - hi) / len).clamp(0.0, 1.0);
    let c = a.max(lo);
    let d = b.min(hi);
    let mut m1 = p_lo * lo + p_hi * hi;
    let mut m2 = p_lo * lo * lo + p_hi * hi * hi;
    if d > c {
        m1 += (d * d - c * c) / (2.0 * len);
        m2 += (d * d * d - c * c * c) / (3.0 * len);
    }
    (m1, m2)
}

/// One replicate of `x` drawn with `rng`.
pub fn meboot_replicate<R: Rng + ?Sized>(x: &[f64], spec: &MebootSpec, rng: &mut R) -> Result<Vec<f64>> {
    Ok(MeDensity::new(x, spec)?.draw(rng))
}

/// `spec.replicates` replicates, replicate `b` drawn from the stream
/// `derive(seed, b)`.
pub fn meboot_ensemble(x: &[f64], spec: &MebootSpec, seed: u64) -> Result<Vec<Vec<f64>>> {
    let density = MeDensity::new(x, spec)?;
    Ok((0..spec.replicates)
        .map(|b| density.draw(&mut rng::stream(rng::derive(seed, b as u64))))
        .collect())
}
