use std::f64::consts::PI;

use super::{lentz, FnAccuracy};
use crate::error::{Error, Result};

pub const ERF_ACCURACY: FnAccuracy = FnAccuracy {
    relative_error_bound: 1e-12,
    domain: "[0, ∞)",
};

// Below this the positive-term series is used; above it, the continued
// fraction for erfc, which needs ~100 iterations at the crossover and fewer
// beyond it.
const SERIES_LIMIT: f64 = 2.0;

/// `erf(y)` for `y ≥ 0`.
pub fn erf(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain("erf", y, "y >= 0"));
    }
    Ok(if y < SERIES_LIMIT {
        erf_series(y)
    } else {
        1.0 - erfc_cf(y)
    })
}

/// `erfc(y) = 1 - erf(y)` for `y ≥ 0`, accurate in relative terms for large `y`.
pub fn erfc(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain("erfc", y, "y >= 0"));
    }
    Ok(if y < SERIES_LIMIT {
        1.0 - erf_series(y)
    } else {
        erfc_cf(y)
    })
}

/// `1/(y√π) - e^{y²} erfc(y)` for `y > 0`, without cancellation.
///
/// The difference is the gap between `erfc` and its leading asymptotic term;
/// for large `y` it behaves like `1/(2√π y³)`.
pub fn erfc_mills_gap(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("erfc_mills_gap", y, "y > 0"));
    }
    if y < SERIES_LIMIT {
        return Ok(1.0 / (y * PI.sqrt()) - (y * y).exp() * (1.0 - erf_series(y)));
    }
    // e^{y²} erfc(y) = 1/(√π (y + T)), T = (1/2)/(y + 1/(y + (3/2)/(y + ...)))
    let tail = 0.5 / lentz(y, |j| (j + 1) as f64 / 2.0, |_| y, 5000);
    Ok(tail / (PI.sqrt() * y * (y + tail)))
}

/// `erf(y) = (2/√π) e^{-y²} Σ 2ᵏ y^{2k+1} / (1·3·…·(2k+1))`; every term is positive.
fn erf_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * y2 / (2.0 * k + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-y2).exp() * sum
}

/// `erfc(y) = e^{-y²}/√π · 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...))))`.
fn erfc_cf(y: f64) -> f64 {
    let f = lentz(y, |j| j as f64 / 2.0, |_| y, 5000);
    (-y * y).exp() / (PI.sqrt() * f)
}
