//! Quadrature rules used by the moment engine.
//!
//! * [`tanh_sinh`] on a finite interval. The integrand receives the
//!   distances to both endpoints computed directly from the transform, so
//!   weights singular at an endpoint can be evaluated without cancellation
//!   in `b - x`.
//! * [`exp_sinh`] on `[0, ∞)`.
//! * [`GaussJacobi`] rules for `(1-t)^α (1+t)^β` on `[-1, 1]`, and
//!   [`gauss_jacobi_adaptive`] which doubles the order until two rules agree.
//!
//! The double-exponential rules halve the step at each level and reuse the
//! previous level's nodes; the error estimate is the change between levels.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::specialfn::gamma_real;

/// Outcome of an adaptive rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Change between the last two refinements.
    pub error: f64,
    pub levels: u32,
    pub evaluations: usize,
}

// Largest |s| = (π/2)|sinh t| used by the double-exponential maps. Keeps
// e^{2s} finite and the endpoint distances (≈ e^{-2s}) well above underflow.
const S_MAX: f64 = 300.0;
const MIN_LEVELS: u32 = 3;

fn converged(current: f64, previous: f64, rel_tol: f64) -> bool {
    let err = (current - previous).abs();
    err <= rel_tol * current.abs() || (current == 0.0 && previous == 0.0)
}

/// Tanh-sinh rule for `∫_a^b f`, where `f(x, x - a, b - x)`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64, max_levels: u32) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "tanh-sinh needs a finite interval a < b, got [{a}, {b}]"
        )));
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let t_max = (S_MAX / FRAC_PI_2).asinh();
    let mut evaluations = 0usize;

    // Contribution of the pair ±t (or the centre when t = 0).
    let mut pair = |t: f64| -> f64 {
        if t == 0.0 {
            evaluations += 1;
            return half * FRAC_PI_2 * f(mid, half, half);
        }
        let s = FRAC_PI_2 * t.sinh();
        let cs = s.cosh();
        let near = half / (s.exp() * cs);
        let far = 2.0 * half - near;
        let w = half * FRAC_PI_2 * t.cosh() / (cs * cs);
        evaluations += 2;
        let right = f(b - near, far, near);
        let left = f(a + near, near, far);
        w * (left + right)
    };

    let mut sum = 0.0f64;
    let mut last_change = f64::NAN;
    let mut h = 1.0;
    for level in 0..=max_levels {
        let (start, stride) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
        let scale = if level == 0 { 0.0 } else { sum.abs() };
        let mut new_sum = 0.0;
        let mut last = f64::INFINITY;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            let term = pair(t);
            if !term.is_finite() {
                return Err(non_finite(level, new_sum));
            }
            new_sum += term;
            let reference = scale.max(new_sum.abs());
            if t > 1.0 && term.abs() <= 1e-20 * reference && term.abs() <= last {
                break;
            }
            last = term.abs();
            k += stride;
        }
        let estimate = if level == 0 {
            new_sum * h
        } else {
            0.5 * sum + new_sum * h
        };
        if level >= MIN_LEVELS && converged(estimate, sum, rel_tol) {
            return Ok(QuadResult {
                value: estimate,
                error: (estimate - sum).abs(),
                levels: level,
                evaluations,
            });
        }
        last_change = (estimate - sum).abs();
        sum = estimate;
        h *= 0.5;
    }
    Err(Error::QuadratureNonConvergence {
        levels: max_levels,
        estimate: sum,
        error: last_change,
    })
}

fn non_finite(level: u32, partial: f64) -> Error {
    Error::QuadratureNonConvergence {
        levels: level,
        estimate: partial,
        error: f64::INFINITY,
    }
}

/// Exp-sinh rule for `∫_0^∞ f`. The integrand must decay at infinity; mild
/// (integrable) singularities at the origin are handled by the map.
pub fn exp_sinh<F>(f: F, rel_tol: f64, max_levels: u32) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let t_left = (S_MAX / FRAC_PI_2).asinh();
    let t_right = (700.0 / FRAC_PI_2).asinh();
    let mut evaluations = 0usize;
    let mut node = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let x = s.exp();
        evaluations += 1;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * x * FRAC_PI_2 * t.cosh()
        }
    };

    let mut sum = 0.0f64;
    let mut last_change = f64::NAN;
    let mut h = 1.0;
    for level in 0..=max_levels {
        let (start, stride) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        let scale = if level == 0 { 0.0 } else { sum.abs() };
        let mut new_sum = 0.0;
        // t ≥ 0 side, then t < 0 side
        for direction in [1i64, -1] {
            let mut k = if direction == 1 { start } else { start.max(1) };
            let mut last = f64::INFINITY;
            loop {
                let t = (direction * k) as f64 * h;
                if t > t_right || t < -t_left {
                    break;
                }
                let term = node(t);
                if !term.is_finite() {
                    return Err(non_finite(level, new_sum));
                }
                new_sum += term;
                let reference = scale.max(new_sum.abs());
                if t.abs() > 1.0
                    && (term == 0.0 || term.abs() <= 1e-20 * reference)
                    && term.abs() <= last
                {
                    break;
                }
                last = term.abs();
                k += stride;
            }
        }
        let estimate = if level == 0 {
            new_sum * h
        } else {
            0.5 * sum + new_sum * h
        };
        if level >= MIN_LEVELS && converged(estimate, sum, rel_tol) {
            return Ok(QuadResult {
                value: estimate,
                error: (estimate - sum).abs(),
                levels: level,
                evaluations,
            });
        }
        last_change = (estimate - sum).abs();
        sum = estimate;
        h *= 0.5;
    }
    Err(Error::QuadratureNonConvergence {
        levels: max_levels,
        estimate: sum,
        error: last_change,
    })
}

/// An `n`-point Gauss–Jacobi rule on `[-1, 1]` for the weight `(1-t)^α (1+t)^β`.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    /// Golub–Welsch nodes, polished by Newton steps on the orthonormal
    /// recurrence, with Christoffel weights `1/Σ p̂ₖ(xᵢ)²`.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 || !(alpha > -1.0) || !(beta > -1.0) {
            return Err(Error::InvalidConfig(format!(
                "Gauss-Jacobi needs n >= 1 and exponents > -1, got n = {n}, alpha = {alpha}, beta = {beta}"
            )));
        }
        let (diag, offdiag) = jacobi_matrix(n, alpha, beta);
        let mu0 = 2f64.powf(alpha + beta + 1.0) * gamma_real(alpha + 1.0) * gamma_real(beta + 1.0)
            / gamma_real(alpha + beta + 2.0);

        let mut d = diag.clone();
        let mut e: Vec<f64> = offdiag[..n - 1].to_vec();
        e.push(0.0);
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        symmetric_tridiagonal_ql(&mut d, &mut e, &mut z)?;

        let mut rule: Vec<(f64, f64)> = d.into_iter().zip(z.iter().map(|v| mu0 * v * v)).collect();
        rule.sort_by(|a, b| a.0.total_cmp(&b.0));

        let inv_sqrt_mu0 = 1.0 / mu0.sqrt();
        for (x, w) in rule.iter_mut() {
            for _ in 0..3 {
                let (p, dp, _) = orthonormal_eval(*x, &diag, &offdiag, inv_sqrt_mu0);
                if dp == 0.0 {
                    break;
                }
                let step = p / dp;
                let next = *x - step;
                if next > -1.0 && next < 1.0 {
                    *x = next;
                }
                if step.abs() <= 1e-17 {
                    break;
                }
            }
            let (_, _, norm2) = orthonormal_eval(*x, &diag, &offdiag, inv_sqrt_mu0);
            *w = 1.0 / norm2;
        }
        Ok(GaussJacobi {
            alpha,
            beta,
            nodes: rule.iter().map(|r| r.0).collect(),
            weights: rule.iter().map(|r| r.1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_0^R x^β (R-x)^α g(x) dx` using this rule.
    pub fn integrate_interval<G: Fn(f64) -> f64>(&self, upper: f64, g: G) -> f64 {
        let half = 0.5 * upper;
        let scale = half.powf(self.alpha + self.beta + 1.0);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * g(half * (1.0 + t)))
            .sum();
        scale * sum
    }
}

/// Recurrence coefficients: diagonal `a_k` (k < n) and off-diagonal `√b_k` (k = 1..=n).
fn jacobi_matrix(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let diag = (0..n)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let k = k as f64;
                (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
            }
        })
        .collect();
    let offdiag = (1..=n)
        .map(|k| {
            let b = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let k = k as f64;
                let s = 2.0 * k + ab;
                4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            b.sqrt()
        })
        .collect();
    (diag, offdiag)
}

/// `(p̂ₙ(x), p̂ₙ'(x), Σ_{k<n} p̂ₖ(x)²)` for the orthonormal polynomials.
fn orthonormal_eval(x: f64, diag: &[f64], offdiag: &[f64], p0: f64) -> (f64, f64, f64) {
    let n = diag.len();
    let (mut p_prev, mut p) = (0.0, p0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut norm2 = 0.0;
    for k in 0..n {
        norm2 += p * p;
        let back = if k == 0 { 0.0 } else { offdiag[k - 1] };
        let p_next = ((x - diag[k]) * p - back * p_prev) / offdiag[k];
        let d_next = ((x - diag[k]) * d + p - back * d_prev) / offdiag[k];
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d, norm2)
}

/// Implicit QL on a symmetric tridiagonal matrix; `e[i]` couples `d[i]` and
/// `d[i+1]`. Tracks only the first component `z` of each eigenvector.
fn symmetric_tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::QuadratureNonConvergence {
                    levels: iterations,
                    estimate: d[l],
                    error: e[l],
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `∫_0^R x^p (R-x)^q g(x) dx` with Gauss–Jacobi rules of order 8, 16, 32, …
/// until consecutive orders agree to `rel_tol`.
pub fn gauss_jacobi_adaptive<G>(
    g: G,
    upper: f64,
    p: f64,
    q: f64,
    rel_tol: f64,
    max_levels: u32,
) -> Result<QuadResult>
where
    G: Fn(f64) -> f64,
{
    let mut previous = f64::NAN;
    let mut last_change = f64::NAN;
    let mut evaluations = 0;
    let mut n = 8usize;
    for level in 0..=max_levels {
        let rule = GaussJacobi::new(n, q, p)?;
        let value = rule.integrate_interval(upper, &g);
        evaluations += n;
        if level > 0 && converged(value, previous, rel_tol) {
            return Ok(QuadResult {
                value,
                error: (value - previous).abs(),
                levels: level,
                evaluations,
            });
        }
        last_change = (value - previous).abs();
        previous = value;
        n *= 2;
    }
    Err(Error::QuadratureNonConvergence {
        levels: max_levels,
        estimate: previous,
        error: last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn beta_fn(a: f64, b: f64) -> f64 {
        gamma_real(a) * gamma_real(b) / gamma_real(a + b)
    }

    #[test]
    fn chebyshev_rule_is_closed_form() {
        let n = 12;
        let rule = GaussJacobi::new(n, -0.5, -0.5).unwrap();
        for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let expected = -((2 * i + 1) as f64 * PI / (2 * n) as f64).cos();
            assert!((x - expected).abs() < 1e-15, "node {i}");
            assert!((w - PI / n as f64).abs() < 1e-14, "weight {i}");
        }
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = GaussJacobi::new(10, 0.0, 0.0).unwrap();
        for k in 0..20 {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum();
            let exact = if k % 2 == 0 {
                2.0 / (k + 1) as f64
            } else {
                0.0
            };
            assert!((got - exact).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn jacobi_rule_reproduces_beta_moments() {
        // ∫_0^R x^{p+k} (R-x)^q dx = R^{p+q+k+1} B(p+k+1, q+1)
        for &(p, q) in &[(-0.5, 0.5), (-2.0 / 3.0, 0.5), (-0.5, -0.5), (0.3, -0.7)] {
            let rule = GaussJacobi::new(16, q, p).unwrap();
            let upper = 4.0;
            for k in 0..30 {
                let got = rule.integrate_interval(upper, |x| x.powi(k));
                let exact =
                    upper.powf(p + q + k as f64 + 1.0) * beta_fn(p + k as f64 + 1.0, q + 1.0);
                assert!((got / exact - 1.0).abs() < 1e-13, "p={p} q={q} k={k}");
            }
        }
    }

    #[test]
    fn gauss_jacobi_rejects_bad_exponents() {
        assert!(GaussJacobi::new(4, -1.0, 0.0).is_err());
        assert!(GaussJacobi::new(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-2/3} (1-x)^{-1/2} dx = B(1/3, 1/2); uses the endpoint distances
        let r = tanh_sinh(
            |_, da, db| da.powf(-2.0 / 3.0) * db.powf(-0.5),
            0.0,
            1.0,
            1e-13,
            12,
        )
        .unwrap();
        assert!((r.value / beta_fn(1.0 / 3.0, 0.5) - 1.0).abs() < 1e-13);
        // log singularity
        let r = tanh_sinh(|_, _, db| -db.ln(), 0.0, 1.0, 1e-13, 12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_smooth_integrand() {
        let r = tanh_sinh(|x, _, _| x.cos(), 0.0, 2.0, 1e-14, 12).unwrap();
        assert!((r.value - 2f64.sin()).abs() < 1e-14);
        assert!(tanh_sinh(|x, _, _| x, 1.0, 1.0, 1e-10, 5).is_err());
    }

    #[test]
    fn exp_sinh_gamma_integrals() {
        for n in [0, 3, 10, 20] {
            let r = exp_sinh(|x| x.powi(n) * (-x).exp() / x.sqrt(), 1e-13, 12).unwrap();
            let exact = gamma_real(n as f64 + 0.5);
            assert!((r.value / exact - 1.0).abs() < 1e-12, "n = {n}");
        }
        // slow stretched-exponential decay: ∫ x^{10} e^{-√x} dx = 2·21!
        let r = exp_sinh(|x| x.powi(10) * (-x.sqrt()).exp(), 1e-13, 12).unwrap();
        assert!((r.value / (2.0 * gamma_real(22.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonconvergence_is_reported() {
        // oscillatory integrand, one level allowed
        let err = tanh_sinh(|x, _, _| (200.0 * x).sin(), 0.0, 10.0, 1e-14, 3).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }
}
