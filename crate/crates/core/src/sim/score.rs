use crate::error::{Error, Result};

/// Interval score of `[lower, upper]` for the realized value `d` at
/// significance `alpha`: the width plus `2/alpha` times the miss distance.
pub fn interval_score(lower: f64, upper: f64, d: f64, alpha: f64) -> Result<f64> {
    if lower > upper {
        return Err(Error::InvalidInterval { lower, upper });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} not in (0, 1)")));
    }
    let penalty = 2.0 / alpha;
    let mut score = upper - lower;
    if d < lower {
        score += penalty * (lower - d);
    }
    if d > upper {
        score += penalty * (d - upper);
    }
    Ok(score)
}
