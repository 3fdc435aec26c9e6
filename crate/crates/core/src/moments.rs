//! Numerical moments `∫₀^R xⁿ W(x) dx` and their comparison with the exact
//! sequence values.
//!
//! Continuous weights go through one of four schemes (see [`Scheme`]); the
//! default per weight comes from [`default_scheme`]. The Bell measure is a
//! finite atom sum and the Catalan–Bell mixture is integrated term by term.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{exp_sinh, gauss_jacobi_adaptive, tanh_sinh};
use crate::sequences::{seq_values, ExactValue, Example, SequenceId};
use crate::weights::{
    bell_atoms, bell_tail_bound, calibrate_constant, ln_factorial, EndpointBehavior, WeightKind,
    WeightSpec, ATOM_CAP, E_INV,
};

/// Quadrature scheme for a continuous weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Scheme {
    /// `x = u²`, then a double-exponential rule in `u`.
    SubstitutionSqrt,
    /// Gauss–Jacobi with `x^p (R − x)^q` factored out; finite support only.
    JacobiEndpoints { p: f64, q: f64 },
    /// Tanh-sinh on `(0, R)` or exp-sinh on `(0, ∞)`.
    DoubleExponential,
    /// Tanh-sinh on `(0, U)` plus an analytic tail bound; infinite support only.
    /// `U` is chosen from the weight's envelope when `cutoff` is `None`.
    TruncatedDe { cutoff: Option<f64> },
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::SubstitutionSqrt => write!(f, "substitution-sqrt"),
            Scheme::JacobiEndpoints { p, q } => write!(f, "jacobi({p},{q})"),
            Scheme::DoubleExponential => write!(f, "double-exponential"),
            Scheme::TruncatedDe { cutoff: None } => write!(f, "truncated-de"),
            Scheme::TruncatedDe { cutoff: Some(u) } => write!(f, "truncated-de({u})"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) forms; `jacobi` alone leaves the
    /// exponents as NaN, to be filled from the weight by [`Scheme::resolve`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            Error::Parse(format!(
                "unknown scheme '{s}'; expected substitution-sqrt, double-exponential, jacobi, jacobi(p,q), truncated-de or truncated-de(U)"
            ))
        };
        let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        match s {
            "substitution-sqrt" => return Ok(Scheme::SubstitutionSqrt),
            "double-exponential" => return Ok(Scheme::DoubleExponential),
            "truncated-de" => return Ok(Scheme::TruncatedDe { cutoff: None }),
            "jacobi" => {
                return Ok(Scheme::JacobiEndpoints {
                    p: f64::NAN,
                    q: f64::NAN,
                })
            }
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("jacobi(").and_then(|r| r.strip_suffix(')')) {
            let (p, q) = inner.split_once(',').ok_or_else(bad)?;
            return Ok(Scheme::JacobiEndpoints {
                p: number(p)?,
                q: number(q)?,
            });
        }
        if let Some(inner) = s
            .strip_prefix("truncated-de(")
            .and_then(|r| r.strip_suffix(')'))
        {
            return Ok(Scheme::TruncatedDe {
                cutoff: Some(number(inner)?),
            });
        }
        Err(bad())
    }
}

impl Scheme {
    /// Fills unspecified Jacobi exponents from the weight's endpoint data.
    pub fn resolve(self, spec: &WeightSpec) -> Scheme {
        match self {
            Scheme::JacobiEndpoints { p, q } if p.is_nan() || q.is_nan() => {
                let q_r = match spec.endpoint_exponent_r {
                    Some(EndpointBehavior::Power(q)) => q,
                    _ => 0.0,
                };
                Scheme::JacobiEndpoints {
                    p: spec.endpoint_exponent_zero,
                    q: q_r,
                }
            }
            other => other,
        }
    }
}

/// Settings for [`moment`] and [`verify_moments`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Refinement levels allowed to the adaptive rules.
    pub max_subdivisions: u32,
    /// `None` selects [`default_scheme`].
    pub scheme: Option<Scheme>,
    /// Relative size allowed for the analytic tail of a truncated integral.
    pub infinite_cutoff_tol: f64,
    /// `|μ₀ − 1|` above which [`verify_moments`] rescales the constant.
    pub calibration_tol: f64,
    /// Absolute tail allowed when truncating the Bell atom list.
    pub atom_tail_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            max_subdivisions: 12,
            scheme: None,
            infinite_cutoff_tol: 1e-13,
            calibration_tol: 1e-8,
            atom_tail_tol: 1e-13,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig(
                "max_subdivisions must be positive".into(),
            ));
        }
        if !(self.infinite_cutoff_tol > 0.0)
            || !(self.calibration_tol > 0.0)
            || !(self.atom_tail_tol > 0.0)
        {
            return Err(Error::InvalidConfig(
                "infinite_cutoff_tol, calibration_tol and atom_tail_tol must be positive".into(),
            ));
        }
        if let Some(Scheme::JacobiEndpoints { p, q }) = self.scheme {
            if !(p > -1.0 && q > -1.0) && !(p.is_nan() || q.is_nan()) {
                return Err(Error::InvalidConfig(format!(
                    "Jacobi exponents must exceed -1, got p = {p}, q = {q}"
                )));
            }
        }
        if let Some(Scheme::TruncatedDe { cutoff: Some(u) }) = self.scheme {
            if !(u > 0.0 && u.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "truncation cutoff must be positive and finite, got {u}"
                )));
            }
        }
        Ok(())
    }
}

/// The scheme used for a continuous weight when none is configured.
pub fn default_scheme(spec: &WeightSpec) -> Scheme {
    let SequenceId::Example(ex) = spec.id else {
        return Scheme::DoubleExponential;
    };
    match ex {
        Example::DoubleFactorialEven | Example::Ex6 | Example::Ex7 => Scheme::SubstitutionSqrt,
        Example::Ex2 | Example::Ex5 | Example::Ex8 => Scheme::DoubleExponential,
        Example::CentralBinomial | Example::Catalan => Scheme::JacobiEndpoints {
            p: f64::NAN,
            q: f64::NAN,
        }
        .resolve(spec),
        Example::MiddleTrinomial | Example::Ex10 => Scheme::DoubleExponential,
    }
}

/// Default highest moment checked by [`verify_moments`] callers: 8 for the
/// Bessel and hypergeometric weights, 10 otherwise.
pub fn default_n_max(id: SequenceId) -> u32 {
    match id {
        SequenceId::Example(Example::Ex7 | Example::Ex8 | Example::MiddleTrinomial) => 8,
        _ => 10,
    }
}

/// `W(x) ≤ A·x^{-1/2}·exp(−λ x^γ)` for `x ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub rate: f64,
    pub power: f64,
}

impl Envelope {
    /// Bound on `∫_U^∞ xⁿ A x^{-1/2} e^{−λx^γ} dx` for `U ≥ 1`, via
    /// `Γ(s, v) ≤ v^{s−1} e^{−v} / (1 − (s−1)/v)` with `s = (n + ½)/γ`.
    pub fn tail_bound(&self, n: u32, upper: f64) -> f64 {
        let s = (n as f64 + 0.5) / self.power;
        let v = self.rate * upper.powf(self.power);
        let ln_gamma_tail = if s <= 1.0 {
            (s - 1.0) * v.ln() - v
        } else if v > s - 1.0 {
            (s - 1.0) * v.ln() - v - (1.0 - (s - 1.0) / v).ln()
        } else {
            return f64::INFINITY;
        };
        (self.amplitude / self.power).ln() - s * self.rate.ln() + ln_gamma_tail
    }
}

/// Envelope constants for the half-line weights with their nominal
/// normalization constants.
pub fn envelope(ex: Example) -> Option<Envelope> {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let (amplitude, rate, power) = match ex {
        Example::DoubleFactorialEven => (0.5, 1.0, 0.5),
        Example::Ex2 => (0.5 / sqrt_pi, 0.25, 1.0),
        Example::Ex5 => (1.0 / sqrt_pi, 0.25, 1.0),
        Example::Ex6 => (1.0, 1.0, 0.5),
        Example::Ex7 => (0.22, 2.0 / 27f64.sqrt(), 0.5),
        Example::Ex8 => (0.32, 4.0 / 27.0, 1.0),
        _ => return None,
    };
    Some(Envelope {
        amplitude,
        rate,
        power,
    })
}

// Carries the first weight-evaluation error out of a quadrature closure.
struct Captured(RefCell<Option<Error>>);

impl Captured {
    fn new() -> Self {
        Captured(RefCell::new(None))
    }

    fn value(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

fn weighted_power(x: f64, n: u32, w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        x.powi(n as i32) * w
    }
}

/// The `n`-th moment; see [`moment_with_scheme`].
pub fn moment(spec: &WeightSpec, n: u32, cfg: &QuadratureConfig) -> Result<f64> {
    moment_with_scheme(spec, n, cfg).map(|(v, _)| v)
}

/// The `n`-th moment of the measure as given (no calibration), with a label
/// naming the method used.
pub fn moment_with_scheme(
    spec: &WeightSpec,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<(f64, String)> {
    cfg.validate()?;
    match spec.kind {
        WeightKind::DiscreteAtoms => {
            let atoms = bell_atoms(cfg.atom_tail_tol, n)?;
            Ok((atoms.moment(n), format!("atom-sum({})", atoms.len())))
        }
        WeightKind::MixedSum => mixed_moment(spec, n, cfg),
        WeightKind::Continuous => {
            let scheme = cfg
                .scheme
                .unwrap_or_else(|| default_scheme(spec))
                .resolve(spec);
            let value = continuous_moment(spec, n, scheme, cfg)?;
            Ok((value, scheme.to_string()))
        }
    }
}

fn continuous_moment(
    spec: &WeightSpec,
    n: u32,
    scheme: Scheme,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let r = spec.support_upper;
    let levels = cfg.max_subdivisions;
    let tol = cfg.rel_tol;
    let cap = Captured::new();
    let result = match (scheme, spec.has_finite_support()) {
        (Scheme::SubstitutionSqrt, false) => exp_sinh(
            |u| {
                let x = u * u;
                let w = cap.value(spec.eval_with_upper_distance(x, f64::INFINITY));
                2.0 * u * weighted_power(x, n, w)
            },
            tol,
            levels,
        ),
        (Scheme::SubstitutionSqrt, true) => {
            let root = r.sqrt();
            tanh_sinh(
                |u, du, dr| {
                    let x = du * du;
                    let d = dr * (2.0 * root - dr);
                    let w = cap.value(spec.eval_with_upper_distance(x, d));
                    2.0 * u * weighted_power(x, n, w)
                },
                0.0,
                root,
                tol,
                levels,
            )
        }
        (Scheme::DoubleExponential, false) => exp_sinh(
            |x| {
                weighted_power(
                    x,
                    n,
                    cap.value(spec.eval_with_upper_distance(x, f64::INFINITY)),
                )
            },
            tol,
            levels,
        ),
        (Scheme::DoubleExponential, true) => tanh_sinh(
            |_, x, d| weighted_power(x, n, cap.value(spec.eval_with_upper_distance(x, d))),
            0.0,
            r,
            tol,
            levels,
        ),
        (Scheme::JacobiEndpoints { p, q }, true) => gauss_jacobi_adaptive(
            |x| {
                let d = r - x;
                let w = cap.value(spec.eval_with_upper_distance(x, d));
                weighted_power(x, n, w) / (x.powf(p) * d.powf(q))
            },
            r,
            p,
            q,
            tol,
            levels.min(8),
        ),
        (Scheme::TruncatedDe { cutoff }, false) => {
            let result = truncated_moment(spec, n, cutoff, cfg, &cap);
            return cap.finish(result);
        }
        (Scheme::JacobiEndpoints { .. }, false) | (Scheme::TruncatedDe { .. }, true) => {
            return Err(Error::Unsupported(format!(
                "scheme {scheme} does not apply to {} (support {})",
                spec.id,
                if spec.has_finite_support() {
                    "finite"
                } else {
                    "infinite"
                }
            )));
        }
    };
    cap.finish(result).map(|q| q.value)
}

fn truncated_moment(
    spec: &WeightSpec,
    n: u32,
    cutoff: Option<f64>,
    cfg: &QuadratureConfig,
    cap: &Captured,
) -> Result<f64> {
    let SequenceId::Example(ex) = spec.id else {
        return Err(Error::Unsupported(format!("no envelope for {}", spec.id)));
    };
    let env =
        envelope(ex).ok_or_else(|| Error::Unsupported(format!("no envelope for {}", spec.id)))?;
    // envelope constants are stated for the nominal constant
    let nominal = WeightSpec::for_sequence(spec.id)?.normalization_constant;
    let ln_scale = (spec.normalization_constant / nominal).ln();
    let integrate = |upper: f64| {
        tanh_sinh(
            |_, x, _| {
                weighted_power(
                    x,
                    n,
                    cap.value(spec.eval_with_upper_distance(x, f64::INFINITY)),
                )
            },
            0.0,
            upper,
            cfg.rel_tol,
            cfg.max_subdivisions,
        )
        .map(|q| q.value)
    };
    let meets = |upper: f64, value: f64| {
        env.tail_bound(n, upper) + ln_scale <= (cfg.infinite_cutoff_tol * value.abs()).ln()
    };
    if let Some(upper) = cutoff {
        let value = integrate(upper)?;
        if upper < 1.0 || !meets(upper, value) {
            return Err(Error::TruncationFailure {
                what: format!("tail beyond cutoff {upper} for {} moment {n}", spec.id),
                cap: 0,
            });
        }
        return Ok(value);
    }
    let s = (n as f64 + 0.5) / env.power;
    let mut upper = ((s + 40.0) / env.rate).powf(1.0 / env.power).max(1.0);
    for _ in 0..60 {
        let value = integrate(upper)?;
        if meets(upper, value) {
            return Ok(value);
        }
        upper *= 2.0;
    }
    Err(Error::TruncationFailure {
        what: format!("half-line cutoff for {} moment {n}", spec.id),
        cap: 60,
    })
}

fn mixed_moment(spec: &WeightSpec, n: u32, cfg: &QuadratureConfig) -> Result<(f64, String)> {
    // term k: (1/(e k!)) ∫_0^{4k} xⁿ (c/k) √((4k − x)/x) dx
    let mut sum = 0.0;
    let mut ln_fact = 0.0;
    let mut unit = f64::NAN;
    for k in 1..=ATOM_CAP {
        let kf = k as f64;
        ln_fact += kf.ln();
        let mass = E_INV * (-ln_fact).exp();
        let upper = 4.0 * kf;
        let constant = spec.normalization_constant / kf;
        let term = gauss_jacobi_adaptive(
            |x| constant * x.powi(n as i32),
            upper,
            -0.5,
            0.5,
            cfg.rel_tol,
            cfg.max_subdivisions.min(8),
        )?
        .value;
        sum += mass * term;
        if k == 1 {
            unit = term;
        }
        // remaining terms are mass_j · jⁿ · unit
        if bell_tail_bound(k, n, ln_factorial(k as u64)) * unit <= 0.01 * cfg.rel_tol * sum {
            if n == 0 {
                sum += E_INV;
            }
            return Ok((sum, format!("jacobi(-0.5,0.5)x{k}")));
        }
    }
    Err(Error::TruncationFailure {
        what: format!("Catalan-Bell mixture moment {n}"),
        cap: ATOM_CAP,
    })
}

/// `∫_{lower}^{upper} xⁿ W(x) dx` by tanh-sinh, for `0 ≤ lower < upper ≤ R`.
pub fn moment_on_interval(
    spec: &WeightSpec,
    n: u32,
    lower: f64,
    upper: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if spec.kind != WeightKind::Continuous
        || !(lower >= 0.0 && lower < upper && upper <= spec.support_upper)
        || upper.is_infinite()
    {
        return Err(Error::InvalidConfig(format!(
            "interval [{lower}, {upper}] is not a finite sub-interval of the support of {}",
            spec.id
        )));
    }
    let r = spec.support_upper;
    let gap = r - upper;
    let cap = Captured::new();
    let result = tanh_sinh(
        |_, da, db| {
            let x = lower + da;
            weighted_power(x, n, cap.value(spec.eval_with_upper_distance(x, gap + db)))
        },
        lower,
        upper,
        cfg.rel_tol,
        cfg.max_subdivisions,
    );
    cap.finish(result).map(|q| q.value)
}

/// One compared moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    pub exact: ExactValue,
    pub numeric: f64,
    pub relative_error: f64,
    pub scheme: String,
}

/// Numeric moments against the exact sequence for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub id: SequenceId,
    pub rows: Vec<MomentRow>,
    pub max_relative_error: f64,
    /// `μ₀` measured with the incoming constant; 1 for the discrete and
    /// mixed measures.
    pub calibration_ratio: f64,
    /// Conventions and calibrations applied while producing the rows.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl MomentReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_relative_error <= tolerance
    }
}

/// `|numeric/exact − 1|`, in log space when `exact` exceeds double range.
pub fn relative_error(numeric: f64, exact: &ExactValue) -> (f64, bool) {
    let e = exact.to_f64();
    if e.is_finite() && e != 0.0 {
        ((numeric / e - 1.0).abs(), false)
    } else {
        (((numeric.ln() - exact.ln()).exp_m1()).abs(), true)
    }
}

/// Calibrates a continuous weight, then compares moments `0..=n_max` with
/// the exact sequence. Moments run in parallel; a failure reports the
/// smallest failing `n`.
pub fn verify_moments(
    spec: &WeightSpec,
    n_max: u32,
    cfg: &QuadratureConfig,
) -> Result<MomentReport> {
    cfg.validate()?;
    let mut notes = Vec::new();
    let (spec, calibration_ratio) = match spec.kind {
        WeightKind::Continuous => {
            let cal =
                calibrate_constant(spec, cfg.calibration_tol, cfg).map_err(|e| Error::Moment {
                    n: 0,
                    source: Box::new(e),
                })?;
            if cal.rescaled {
                notes.push(format!(
                    "normalization constant rescaled from {:e} to {:e} (measured mu0 = {:e})",
                    spec.normalization_constant, cal.spec.normalization_constant, cal.measured_mu0
                ));
            }
            (cal.spec, cal.measured_mu0)
        }
        WeightKind::DiscreteAtoms => {
            notes.push("atom of mass 1/e at x = 0 included (0^0 = 1)".to_string());
            (spec.clone(), 1.0)
        }
        WeightKind::MixedSum => {
            notes.push("k = 0 term contributes mass 1/e at x = 0 (0^0 = 1)".to_string());
            (spec.clone(), 1.0)
        }
    };
    let exact = seq_values(spec.id, n_max);
    let outcomes: Vec<Result<(f64, String)>> = (0..=n_max)
        .into_par_iter()
        .map(|n| moment_with_scheme(&spec, n, cfg))
        .collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut log_space = false;
    for ((n, outcome), exact) in (0..=n_max).zip(outcomes).zip(exact) {
        let (numeric, scheme) = outcome.map_err(|e| Error::Moment {
            n,
            source: Box::new(e),
        })?;
        let (relative_error, logged) = relative_error(numeric, &exact);
        log_space |= logged;
        rows.push(MomentRow {
            n,
            exact,
            numeric,
            relative_error,
            scheme,
        });
    }
    if log_space {
        notes.push("exact values beyond double range compared in log space".to_string());
    }
    let max_relative_error = rows.iter().map(|r| r.relative_error).fold(0.0, f64::max);
    Ok(MomentReport {
        id: spec.id,
        rows,
        max_relative_error,
        calibration_ratio,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::seq_value;

    fn spec(id: SequenceId) -> WeightSpec {
        WeightSpec::for_sequence(id).unwrap()
    }

    fn ex(n: u8) -> WeightSpec {
        spec(SequenceId::Example(Example::from_number(n).unwrap()))
    }

    #[test]
    fn moment_examples() {
        let cfg = QuadratureConfig::default();
        assert!((moment(&ex(1), 0, &cfg).unwrap() - 1.0).abs() < 1e-10);
        assert!((moment(&ex(3), 2, &cfg).unwrap() - 6.0).abs() < 1e-8);
        assert!((moment(&spec(SequenceId::Bell), 3, &cfg).unwrap() - 5.0).abs() < 1e-10);
        let cb = spec(SequenceId::Product(Example::Catalan));
        assert!((moment(&cb, 2, &cfg).unwrap() - 4.0).abs() < 1e-6);
        assert!((moment(&cb, 0, &cfg).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn catalan_weight_needs_calibration() {
        let cfg = QuadratureConfig::default();
        let report = verify_moments(&ex(4), 10, &cfg).unwrap();
        assert!((report.calibration_ratio - 2.0).abs() < 1e-8);
        assert!(report.max_relative_error < 1e-8);
        assert_eq!(report.notes.len(), 1);
    }

    #[test]
    fn scheme_round_trip() {
        for s in [
            Scheme::SubstitutionSqrt,
            Scheme::DoubleExponential,
            Scheme::JacobiEndpoints { p: -0.5, q: 0.5 },
            Scheme::TruncatedDe { cutoff: None },
            Scheme::TruncatedDe {
                cutoff: Some(250.0),
            },
        ] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("simpson".parse::<Scheme>().is_err());
        let resolved = "jacobi".parse::<Scheme>().unwrap().resolve(&ex(4));
        assert_eq!(resolved, Scheme::JacobiEndpoints { p: -0.5, q: 0.5 });
    }

    #[test]
    fn config_validation() {
        let cfg = QuadratureConfig {
            rel_tol: 1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = QuadratureConfig {
            scheme: Some(Scheme::JacobiEndpoints { p: -1.0, q: 0.0 }),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn scheme_support_mismatch() {
        let cfg = QuadratureConfig {
            scheme: Some(Scheme::JacobiEndpoints { p: -0.5, q: 0.0 }),
            ..Default::default()
        };
        assert!(matches!(
            moment(&ex(1), 0, &cfg),
            Err(Error::Unsupported(_))
        ));
        let cfg = QuadratureConfig {
            scheme: Some(Scheme::TruncatedDe { cutoff: None }),
            ..Default::default()
        };
        assert!(matches!(
            moment(&ex(3), 0, &cfg),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn truncated_scheme() {
        let cfg = QuadratureConfig {
            scheme: Some(Scheme::TruncatedDe { cutoff: None }),
            ..Default::default()
        };
        for id in [1u8, 2, 5, 6] {
            for n in [0u32, 4] {
                let exact =
                    seq_value(SequenceId::Example(Example::from_number(id).unwrap()), n).to_f64();
                let v = moment(&ex(id), n, &cfg).unwrap();
                assert!((v / exact - 1.0).abs() < 1e-9, "ex{id} n={n}: {v}");
            }
        }
        let short = QuadratureConfig {
            scheme: Some(Scheme::TruncatedDe { cutoff: Some(5.0) }),
            ..Default::default()
        };
        assert!(matches!(
            moment(&ex(1), 2, &short),
            Err(Error::TruncationFailure { .. })
        ));
    }

    #[test]
    fn envelopes_bound_the_weights() {
        for id in [1u8, 2, 5, 6, 7, 8] {
            let w = ex(id);
            let env = envelope(Example::from_number(id).unwrap()).unwrap();
            for i in 0..400 {
                let x = 10f64.powf(i as f64 * 3.0 / 399.0);
                let bound = env.amplitude / x.sqrt() * (-env.rate * x.powf(env.power)).exp();
                let value = w.eval(x).unwrap();
                assert!(
                    value <= bound * (1.0 + 1e-12),
                    "ex{id} at x = {x}: {value} > {bound}"
                );
            }
        }
    }

    #[test]
    fn relative_error_in_log_space() {
        use num_bigint::BigUint;
        let huge = ExactValue::from_integer(BigUint::from(10u32).pow(400));
        let (err, logged) = relative_error(f64::INFINITY, &huge);
        assert!(logged);
        assert!(err.is_infinite());
        let (err, logged) = relative_error(2.0, &ExactValue::from_integer(BigUint::from(2u32)));
        assert!(!logged && err == 0.0);
    }
}
