//! Double-precision special functions used by the weight functions.
//!
//! Each public function declares its domain and relative accuracy through a
//! [`FnAccuracy`] constant; the bounds are checked against high-precision
//! reference tables in the integration tests.

mod bessel;
mod erf;
mod expint;
mod gamma;
mod hyper;

pub use bessel::{bessel_k, bessel_k_scaled, BESSEL_K_ACCURACY};
pub use erf::{erf, erfc, erfc_mills_gap, ERF_ACCURACY};
pub use expint::{e1_gap, expint_e1, expint_ei_neg, EXPINT_ACCURACY};
pub use gamma::{digamma, gamma_fn, gamma_real, rgamma, GAMMA_ACCURACY};
pub use hyper::{hyp2f1, hyp2f1_complement, HYP2F1_ACCURACY};

/// Declared accuracy contract of an exported function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnAccuracy {
    pub relative_error_bound: f64,
    /// Closed/open interval of validity, as text.
    pub domain: &'static str,
}

/// Heaviside step with `H(0) = 0`.
pub fn heaviside(y: f64) -> f64 {
    if y > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Evaluates `b0 + a1/(b1 + a2/(b2 + ...))` by the modified Lentz method.
pub(crate) fn lentz<A, B>(b0: f64, a: A, b: B, max_iter: usize) -> f64
where
    A: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    const TINY: f64 = 1e-300;
    let mut f = if b0 == 0.0 { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for j in 1..=max_iter {
        let (aj, bj) = (a(j), b(j));
        d = bj + aj * d;
        if d == 0.0 {
            d = TINY;
        }
        c = bj + aj / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    f
}
