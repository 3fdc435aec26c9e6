use std::f64::consts::PI;

use super::FnAccuracy;
use crate::error::{Error, Result};

pub const GAMMA_ACCURACY: FnAccuracy = FnAccuracy {
    relative_error_bound: 1e-13,
    domain: "(0, 20]",
};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(y)` for `y > 0`.
pub fn gamma_fn(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("gamma_fn", y, "y > 0"));
    }
    Ok(gamma_real(y))
}

/// `Γ(y)` for any real `y`; poles return `±∞` (sign meaningless).
pub fn gamma_real(y: f64) -> f64 {
    if y < 0.5 {
        if y == y.floor() {
            return f64::INFINITY;
        }
        // reflection
        PI / ((PI * y).sin() * gamma_real(1.0 - y))
    } else if y < 1.5 {
        // shift up one to keep the Lanczos sum in its most accurate range
        lanczos(y + 1.0) / y
    } else {
        lanczos(y)
    }
}

/// `1/Γ(y)`, zero at the poles.
pub fn rgamma(y: f64) -> f64 {
    if y <= 0.0 && y == y.floor() {
        0.0
    } else {
        1.0 / gamma_real(y)
    }
}

fn lanczos(y: f64) -> f64 {
    let x = y - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that large arguments do not overflow early
    let half = t.powf((x + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * sum
}

/// Digamma `ψ(x)` for real `x` away from the poles.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k x^2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}
