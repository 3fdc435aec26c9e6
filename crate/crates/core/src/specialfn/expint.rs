use super::{lentz, FnAccuracy};
use crate::error::{Error, Result};

pub const EXPINT_ACCURACY: FnAccuracy = FnAccuracy {
    relative_error_bound: 1e-12,
    domain: "(0, ∞)",
};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Power series up to here, continued fraction beyond.
const SERIES_LIMIT: f64 = 1.0;

/// `Ei(-y) = -E₁(y)` for `y > 0`.
pub fn expint_ei_neg(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("expint_ei_neg", y, "y > 0"));
    }
    Ok(-e1(y))
}

/// `E₁(y)` for `y > 0`.
pub fn expint_e1(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("expint_e1", y, "y > 0"));
    }
    Ok(e1(y))
}

/// `1/y - e^{y} E₁(y)` for `y > 0`, without cancellation at large `y`.
pub fn e1_gap(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("e1_gap", y, "y > 0"));
    }
    if y <= SERIES_LIMIT {
        return Ok(1.0 / y - y.exp() * e1_series(y));
    }
    // e^y E₁(y) = 1/(y + 1 - S),  S = 1/(y + 3 - 4/(y + 5 - 9/(y + 7 - ...)))
    let s = 1.0 / e1_cf_inner(y);
    Ok((1.0 - s) / (y * (y + 1.0 - s)))
}

fn e1(y: f64) -> f64 {
    if y <= SERIES_LIMIT {
        e1_series(y)
    } else {
        (-y).exp() / (y + 1.0 - 1.0 / e1_cf_inner(y))
    }
}

/// `E₁(y) = -γ - ln y - Σ (-y)ᵏ/(k·k!)`.
fn e1_series(y: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -y / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - y.ln() - sum
}

/// `y + 3 - 4/(y + 5 - 9/(y + 7 - ...))`.
fn e1_cf_inner(y: f64) -> f64 {
    lentz(
        y + 3.0,
        |j| -(((j + 1) * (j + 1)) as f64),
        |j| y + 3.0 + 2.0 * j as f64,
        5000,
    )
}
