//! Normalization series, state amplitudes and overlaps.
//!
//! All series are summed with the term recurrence `tₙ = tₙ₋₁·x/εₙ`, where
//! `εₙ = c(n)/c(n−1)` is non-decreasing for every supported sequence. The
//! term ratios `x/εₙ₊₁` are then non-increasing, and once one is below 1 the
//! remaining tail is bounded by a geometric series.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequences::{radius_of_convergence, step_ratio_f64, SequenceId};

/// Terms allowed before a series is declared too slow.
pub const SERIES_CAP: usize = 100_000_000;
/// Largest state truncation order reached by auto-extension.
pub const STATE_CAP: u32 = 100_000;
/// Relative distance to `R` below which series are refused.
pub const SLOW_MARGIN: f64 = 1e-6;

/// Input to [`state_coefficients`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    pub id: SequenceId,
    pub z: Complex64,
    pub n_max: u32,
    pub series_tol: f64,
}

/// Amplitudes `aₙ = zⁿ/√(c(n)·N(|z|²))` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
    /// `1 − Σ|aₙ|²`, computed from the omitted terms.
    pub truncation_mass: f64,
    /// `N(|z|²)`.
    pub normalization: f64,
}

impl StateVector {
    pub fn n_max(&self) -> u32 {
        self.amplitudes.len() as u32 - 1
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "series tolerance must lie in (0, 1), got {tol}"
        )));
    }
    Ok(())
}

/// Radius for state construction; Bell and product sequences are rejected.
fn state_radius(id: SequenceId) -> Result<f64> {
    match id {
        SequenceId::Bell | SequenceId::Product(_) => Err(Error::Unsupported(format!(
            "{id} is available for moment verification only, not for state construction"
        ))),
        _ => radius_of_convergence(id),
    }
}

fn check_argument(id: SequenceId, x: f64) -> Result<f64> {
    let radius = state_radius(id)?;
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::domain("normalization", x, "0 <= x < R"));
    }
    if x >= radius {
        return Err(Error::RadiusExceeded { x, radius });
    }
    if radius.is_finite() && x / radius > 1.0 - SLOW_MARGIN {
        return Err(Error::SlowConvergence { x, radius });
    }
    Ok(radius)
}

fn epsilon(id: SequenceId, n: u32) -> f64 {
    step_ratio_f64(id, n).expect("step ratio exists for supported sequences")
}

/// Sums `Σ_{n>skip} tₙ` from the term `t_skip` onwards (exclusive) until the
/// geometric tail bound is below `abs_tol`. Returns the sum and the last index.
fn tail_from(
    id: SequenceId,
    x: f64,
    start_index: u32,
    start_term: f64,
    abs_tol: f64,
) -> Result<(f64, u32)> {
    let mut term = start_term;
    let mut sum = 0.0;
    let mut previous_ratio = f64::INFINITY;
    for n in (start_index..).take(SERIES_CAP) {
        let ratio = x / epsilon(id, n + 1);
        if ratio < 1.0 && ratio <= previous_ratio && term * ratio / (1.0 - ratio) <= abs_tol {
            return Ok((sum, n));
        }
        if ratio == 0.0 {
            return Ok((sum, n));
        }
        previous_ratio = ratio;
        term *= ratio;
        sum += term;
        if !sum.is_finite() {
            return Err(Error::domain(
                "normalization",
                x,
                "arguments whose series stays within double range",
            ));
        }
    }
    Err(Error::TruncationFailure {
        what: format!("normalization series of {id} at x = {x}"),
        cap: SERIES_CAP,
    })
}

/// `N(x) = Σ xⁿ/c(n)`, summed until the certified relative tail is below `tol`.
pub fn normalization(id: SequenceId, x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    check_argument(id, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    // the sum is at least 1, so an absolute tail of tol/2 is relative
    let (rest, _) = tail_from(id, x, 0, 1.0, 0.5 * tol)?;
    Ok(1.0 + rest)
}

/// Amplitudes of `|z⟩` truncated at `p.n_max`, extending the order (up to
/// [`STATE_CAP`]) until the omitted probability is below `p.series_tol`.
pub fn state_coefficients(p: &StateParams) -> Result<StateVector> {
    check_tol(p.series_tol)?;
    let x = p.z.norm_sqr();
    check_argument(p.id, x)?;
    let norm = normalization(p.id, x, 0.01 * p.series_tol)?;

    let mut amplitudes = Vec::with_capacity(p.n_max as usize + 1);
    let mut a = Complex64::new(1.0 / norm.sqrt(), 0.0);
    let mut term = 1.0;
    amplitudes.push(a);
    let mut n = 0;
    let mut target = p.n_max;
    loop {
        if n >= target {
            // omitted mass relative to N, bounded as in `normalization`
            let slack = 0.01 * p.series_tol * norm;
            let (tail, last) = tail_from(p.id, x, n, term, slack)?;
            if (tail + slack) / norm < p.series_tol {
                return Ok(StateVector {
                    amplitudes,
                    truncation_mass: tail / norm,
                    normalization: norm,
                });
            }
            if last > STATE_CAP {
                return Err(Error::TruncationFailure {
                    what: format!("state vector of {} at |z|^2 = {x}", p.id),
                    cap: STATE_CAP as usize,
                });
            }
            target = last.max(n + 1);
        }
        n += 1;
        let eps = epsilon(p.id, n);
        a = a * p.z / eps.sqrt();
        term *= x / eps;
        amplitudes.push(a);
    }
}

/// `⟨z|w⟩ = Σ (z̄w)ⁿ/c(n) / √(N(|z|²)·N(|w|²))`, accurate to `tol` absolutely.
pub fn overlap(id: SequenceId, z: Complex64, w: Complex64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let (xz, xw) = (z.norm_sqr(), w.norm_sqr());
    check_argument(id, xz)?;
    check_argument(id, xw)?;
    let q = z.conj() * w;
    check_argument(id, q.norm())?;
    let scale = (normalization(id, xz, 0.1 * tol)? * normalization(id, xw, 0.1 * tol)?).sqrt();

    let x = q.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut magnitude = 1.0;
    let mut previous_ratio = f64::INFINITY;
    let abs_tol = 0.1 * tol * scale;
    for n in 0..SERIES_CAP as u32 {
        let eps = epsilon(id, n + 1);
        let ratio = x / eps;
        if ratio == 0.0
            || (ratio < 1.0
                && ratio <= previous_ratio
                && magnitude * ratio / (1.0 - ratio) <= abs_tol)
        {
            return Ok(sum / scale);
        }
        previous_ratio = ratio;
        term = term * q / eps;
        magnitude *= ratio;
        sum += term;
    }
    Err(Error::TruncationFailure {
        what: format!("overlap series of {id}"),
        cap: SERIES_CAP,
    })
}
