//! Weight functions whose moments are the sequences of [`crate::sequences`].
//!
//! Each continuous weight is stored as `normalization_constant × shape(x)`,
//! so calibration only touches the constant. Several shapes are evaluated in
//! rearranged forms that avoid cancellation: the error-function weight uses
//! the Mills-ratio gap, the exponential-integral weight uses `1/u − eᵘE₁(u)`,
//! and the two finite-support weights whose formulas vanish or cancel at `R`
//! take the distance `R − x` directly.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::moments::{moment, QuadratureConfig};
use crate::sequences::{radius_of_convergence, rational_to_f64, Example, SequenceId};
use crate::specialfn::{
    bessel_k, bessel_k_scaled, e1_gap, erfc_mills_gap, gamma_real, hyp2f1, hyp2f1_complement,
};

/// How the measure is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Continuous,
    /// Point masses at the positive integers (plus the origin convention).
    DiscreteAtoms,
    /// A mass-weighted sum of rescaled continuous weights.
    MixedSum,
}

/// Behaviour of a weight as `x → R⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointBehavior {
    /// `W(x) ~ (R − x)^q`.
    Power(f64),
    /// Logarithmic terms in `R − x`.
    Logarithmic,
}

/// A weight together with the structural data the quadrature engine uses.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub id: SequenceId,
    /// `R`; `f64::INFINITY` for the half-line.
    pub support_upper: f64,
    pub kind: WeightKind,
    /// `p` with `W(x) ~ x^p` as `x → 0⁺`.
    pub endpoint_exponent_zero: f64,
    /// `None` for infinite support.
    pub endpoint_exponent_r: Option<EndpointBehavior>,
    pub normalization_constant: f64,
}

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// `1/e`.
pub const E_INV: f64 = 0.367_879_441_171_442_33;
/// Hard cap on the number of atoms or mixture terms.
pub const ATOM_CAP: usize = 2000;

impl WeightSpec {
    /// The weight with the nominal constant for `id`.
    ///
    /// Products other than Catalan × Bell have no closed-form weight here.
    pub fn for_sequence(id: SequenceId) -> Result<Self> {
        match id {
            SequenceId::Example(ex) => Ok(Self::example(ex)),
            SequenceId::Bell => Ok(WeightSpec {
                id,
                support_upper: f64::INFINITY,
                kind: WeightKind::DiscreteAtoms,
                endpoint_exponent_zero: 0.0,
                endpoint_exponent_r: None,
                normalization_constant: 1.0,
            }),
            SequenceId::Product(Example::Catalan) => Ok(WeightSpec {
                id,
                support_upper: f64::INFINITY,
                kind: WeightKind::MixedSum,
                endpoint_exponent_zero: -0.5,
                endpoint_exponent_r: None,
                normalization_constant: 1.0 / (2.0 * PI),
            }),
            SequenceId::FactorialBaseline | SequenceId::Product(_) => Err(Error::Unsupported(
                format!("no weight function is available for sequence {id}"),
            )),
        }
    }

    fn example(ex: Example) -> Self {
        use EndpointBehavior::Power;
        let id = SequenceId::Example(ex);
        let support_upper = radius_of_convergence(id).unwrap_or(f64::INFINITY);
        let (zero, at_r, constant) = match ex {
            Example::DoubleFactorialEven => (-0.5, None, 0.5),
            Example::Ex2 => (-0.5, None, 1.0 / (2.0 * SQRT_PI)),
            Example::CentralBinomial => (-0.5, Some(Power(-0.5)), 1.0 / PI),
            Example::Catalan => (-0.5, Some(Power(0.5)), 1.0 / PI),
            Example::Ex5 => (-0.5, None, 1.0),
            Example::Ex6 => (-0.5, None, 1.0),
            Example::Ex7 => (-2.0 / 3.0, None, 1.0 / (3.0 * PI)),
            Example::Ex8 => (-2.0 / 3.0, None, SQRT_3 / (27.0 * PI)),
            Example::MiddleTrinomial => (-2.0 / 3.0, Some(Power(0.0)), 1.0),
            Example::Ex10 => (
                -2.0 / 3.0,
                Some(Power(0.5)),
                SQRT_3 * 2f64.powf(2.0 / 3.0) / (12.0 * PI),
            ),
        };
        WeightSpec {
            id,
            support_upper,
            kind: WeightKind::Continuous,
            endpoint_exponent_zero: zero,
            endpoint_exponent_r: at_r,
            normalization_constant: constant,
        }
    }

    pub fn has_finite_support(&self) -> bool {
        self.support_upper.is_finite()
    }

    /// Same weight with a different multiplicative constant.
    pub fn with_constant(&self, constant: f64) -> Self {
        WeightSpec {
            normalization_constant: constant,
            ..self.clone()
        }
    }

    /// `W(x)`; see [`weight_eval`].
    pub fn eval(&self, x: f64) -> Result<f64> {
        weight_eval(self, x)
    }

    /// `W(x)` where the caller also supplies `R − x`, which may be more
    /// accurate than the subtraction near the upper endpoint. Ignored for
    /// infinite support.
    pub fn eval_with_upper_distance(&self, x: f64, upper_distance: f64) -> Result<f64> {
        self.check_continuous()?;
        self.check_support(x, upper_distance)?;
        let SequenceId::Example(ex) = self.id else {
            unreachable!("continuous weights are examples")
        };
        Ok(self.normalization_constant * shape(ex, x, upper_distance)?)
    }

    fn check_continuous(&self) -> Result<()> {
        if self.kind != WeightKind::Continuous {
            return Err(Error::Unsupported(format!(
                "{} is not a continuous weight; use bell_atoms or cb_weight_eval",
                self.id
            )));
        }
        Ok(())
    }

    // Near R the distance decides: x itself may round to R.
    fn check_support(&self, x: f64, upper_distance: f64) -> Result<()> {
        if x == 0.0 {
            return Err(self.singular(0.0));
        }
        if self.has_finite_support() {
            if upper_distance == 0.0 {
                return Err(self.singular(self.support_upper));
            }
            if !(x > 0.0 && x <= self.support_upper && upper_distance > 0.0) {
                return Err(Error::domain("weight_eval", x, "the open support (0, R)"));
            }
        } else if !(x > 0.0 && x < f64::INFINITY) {
            return Err(Error::domain("weight_eval", x, "the open support (0, inf)"));
        }
        Ok(())
    }

    fn singular(&self, x: f64) -> Error {
        Error::SingularEndpoint {
            id: self.id.to_string(),
            x,
        }
    }
}

/// `W(x)` for a continuous weight, for `0 < x < R`.
pub fn weight_eval(spec: &WeightSpec, x: f64) -> Result<f64> {
    spec.eval_with_upper_distance(x, spec.support_upper - x)
}

/// The closed-form expression divided by its leading constant.
fn shape(ex: Example, x: f64, d: f64) -> Result<f64> {
    let value = match ex {
        Example::DoubleFactorialEven => (-x.sqrt()).exp() / x.sqrt(),
        Example::Ex2 => (-0.25 * x).exp() / x.sqrt(),
        Example::CentralBinomial => 1.0 / (x * d).sqrt(),
        Example::Catalan => (d / x).sqrt(),
        Example::Ex5 => {
            // −1/2 + e^{−y²}/(√π·2y) + erf(y)/2 with y = √x/2
            let y = 0.5 * x.sqrt();
            0.5 * (-y * y).exp() * erfc_mills_gap(y)?
        }
        Example::Ex6 => {
            // e^{−u}/u + Ei(−u) with u = √x
            let u = x.sqrt();
            (-u).exp() * e1_gap(u)?
        }
        Example::Ex7 => bessel_k(1.0 / 3.0, 2.0 * (x / 27.0).sqrt())? / x.sqrt(),
        Example::Ex8 => {
            let y = 2.0 * x / 27.0;
            (-2.0 * y).exp() * (bessel_k_scaled(1.0 / 3.0, y)? + bessel_k_scaled(2.0 / 3.0, y)?)
        }
        Example::MiddleTrinomial => trinomial_shape(x, d)?,
        Example::Ex10 => {
            // bracket 2^{1/3} t^{2/3} − 6 x^{1/3} with t = 27 + 3√(81 − 12x),
            // rewritten as (a³ − b³)/(a² + ab + b²); a³ − b³ = 324 s + 432 d
            let s = (12.0 * d).sqrt();
            let t = 27.0 + 3.0 * s;
            let a = 2f64.cbrt() * t.powf(2.0 / 3.0);
            let b = 6.0 * x.cbrt();
            let bracket = (324.0 * s + 432.0 * d) / (a * a + a * b + b * b);
            bracket / (x.powf(2.0 / 3.0) * t.cbrt())
        }
    };
    Ok(value)
}

fn trinomial_shape(x: f64, d: f64) -> Result<f64> {
    let g = gamma_real(2.0 / 3.0).powi(3);
    let alpha = 1.0 / (3.0 * g);
    let beta = -SQRT_3 / (8.0 * PI.powi(3)) * g;
    let (f1, f2) = if x <= 13.5 {
        let z = x / 27.0;
        (
            hyp2f1(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, z)?,
            hyp2f1(2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, z)?,
        )
    } else {
        let w = d / 27.0;
        (
            hyp2f1_complement(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, w)?,
            hyp2f1_complement(2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, w)?,
        )
    };
    Ok(alpha * x.powf(-2.0 / 3.0) * f1 + beta * x.powf(-1.0 / 3.0) * f2)
}

/// One point mass of the discrete Bell measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: u32,
    pub mass: f64,
}

/// Atoms `(1/e)/k!` at `k = 1..K`, plus the mass `1/e` at the origin that
/// carries the `0⁰ = 1` convention for the zeroth moment.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomList {
    pub atoms: Vec<Atom>,
    pub origin_mass: f64,
}

impl AtomList {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass of the atoms at the positive integers.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().rev().map(|a| a.mass).sum()
    }

    /// `Σ kⁿ·mass(k)`, including the origin atom when `n = 0`.
    pub fn moment(&self, n: u32) -> f64 {
        let body: f64 = self
            .atoms
            .iter()
            .rev()
            .map(|a| (a.location as f64).powi(n as i32) * a.mass)
            .sum();
        if n == 0 {
            body + self.origin_mass
        } else {
            body
        }
    }
}

/// `(1/e)·Σ_{k>K} kⁿ/k!`, bounded by the first omitted term over `1 − r`
/// with `r` the (decreasing) term ratio. Takes `ln K!`.
pub(crate) fn bell_tail_bound(big_k: usize, n: u32, ln_factorial_k: f64) -> f64 {
    let k1 = (big_k + 1) as f64;
    let ln_term = n as f64 * k1.ln() - ln_factorial_k - k1.ln();
    let ratio = (1.0 + 1.0 / k1).powi(n as i32) / (k1 + 1.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    E_INV * ln_term.exp() / (1.0 - ratio)
}

/// Atoms `1..K` with `K` the smallest index whose tail bound for the
/// `n_max`-th moment is below `tail_tol`.
pub fn bell_atoms(tail_tol: f64, n_max: u32) -> Result<AtomList> {
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tail_tol must be positive, got {tail_tol}"
        )));
    }
    let mut atoms = Vec::new();
    let mut factorial = BigUint::one();
    let mut ln_factorial = 0.0;
    for k in 1..=ATOM_CAP {
        factorial *= k;
        ln_factorial += (k as f64).ln();
        let inverse = BigRational::new(BigUint::one().into(), factorial.clone().into());
        atoms.push(Atom {
            location: k as u32,
            mass: E_INV * rational_to_f64(&inverse),
        });
        if bell_tail_bound(k, n_max, ln_factorial) < tail_tol {
            return Ok(AtomList {
                atoms,
                origin_mass: E_INV,
            });
        }
    }
    Err(Error::TruncationFailure {
        what: format!("Bell atom list for n_max = {n_max}"),
        cap: ATOM_CAP,
    })
}

/// `ln k!`: exact summation for small `k`, Stirling series above.
pub(crate) fn ln_factorial(k: u64) -> f64 {
    if k <= 30 {
        return (2..=k).map(|j| (j as f64).ln()).sum();
    }
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// The Catalan–Bell mixed weight
/// `1/(2πe) Σ_{k>x/4} √((4k − x)/x) / (k·k!)`, summed until the bound on
/// the remaining tail is below `tail_tol` times the partial sum.
pub fn cb_weight_eval(x: f64, tail_tol: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("cb_weight_eval", x, "0 < x < inf"));
    }
    if (x / 4.0).fract() == 0.0 {
        return Err(Error::domain(
            "cb_weight_eval",
            x,
            "x not a kink point 4k (k >= 1)",
        ));
    }
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tail_tol must be positive, got {tail_tol}"
        )));
    }
    let prefactor = E_INV / (2.0 * PI);
    let first = (x / 4.0).floor() as u64 + 1;
    let mut ln_fact = ln_factorial(first);
    let mut sum = 0.0;
    for k in first..first + ATOM_CAP as u64 {
        let kf = k as f64;
        let ln_coeff = -ln_fact - kf.ln();
        sum += ((4.0 * kf - x) / x).sqrt() * ln_coeff.exp();
        // Σ_{j>k} √(4j/x)/(j·j!) ≤ (2/√x)·(1/(k+1)!)·(k+2)/(k+1)
        ln_fact += (kf + 1.0).ln();
        let tail = 2.0 / x.sqrt() * (-ln_fact).exp() * (kf + 2.0) / (kf + 1.0);
        if tail < tail_tol * sum {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::TruncationFailure {
        what: format!("Catalan-Bell weight at x = {x}"),
        cap: ATOM_CAP,
    })
}

/// The interior grid used by [`positivity_scan`].
///
/// Infinite support: `grid_size` points log-spaced on `[1e-8, 1e3]`.
/// Finite support: half log-spaced in the distance from 0 and half in the
/// distance from `R`, each from `1e-8·R` to `R/2`.
pub fn positivity_grid(spec: &WeightSpec, grid_size: usize) -> Vec<(f64, f64)> {
    let logspace = |lo: f64, hi: f64, count: usize| -> Vec<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        (0..count)
            .map(|i| {
                let t = if count == 1 {
                    0.0
                } else {
                    i as f64 / (count - 1) as f64
                };
                (a + t * (b - a)).exp()
            })
            .collect()
    };
    if spec.has_finite_support() {
        let r = spec.support_upper;
        let lower = grid_size / 2;
        let mut grid: Vec<(f64, f64)> = logspace(1e-8 * r, 0.5 * r, lower)
            .into_iter()
            .map(|x| (x, r - x))
            .collect();
        grid.extend(
            logspace(1e-8 * r, 0.5 * r, grid_size - lower)
                .into_iter()
                .map(|d| (r - d, d)),
        );
        grid
    } else {
        logspace(1e-8, 1e3, grid_size)
            .into_iter()
            .map(|x| (x, f64::INFINITY))
            .collect()
    }
}

/// Minimum of the weight over [`positivity_grid`].
pub fn positivity_scan(spec: &WeightSpec, grid_size: usize) -> Result<f64> {
    spec.check_continuous()?;
    if grid_size < 2 {
        return Err(Error::InvalidConfig(
            "positivity_scan needs at least 2 grid points".into(),
        ));
    }
    let mut min = f64::INFINITY;
    for (x, d) in positivity_grid(spec, grid_size) {
        min = min.min(spec.eval_with_upper_distance(x, d)?);
    }
    Ok(min)
}

/// Outcome of [`calibrate_constant`].
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub spec: WeightSpec,
    /// Zeroth moment measured with the incoming constant.
    pub measured_mu0: f64,
    pub rescaled: bool,
}

/// Measures the zeroth moment `μ₀` and, if `|μ₀ − 1| > tol`, divides the
/// constant by `μ₀`.
pub fn calibrate_constant(
    spec: &WeightSpec,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Calibration> {
    spec.check_continuous()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "calibration tolerance must be positive, got {tol}"
        )));
    }
    let mu0 = moment(spec, 0, cfg)?;
    if (mu0 - 1.0).abs() <= tol {
        return Ok(Calibration {
            spec: spec.clone(),
            measured_mu0: mu0,
            rescaled: false,
        });
    }
    Ok(Calibration {
        spec: spec.with_constant(spec.normalization_constant / mu0),
        measured_mu0: mu0,
        rescaled: true,
    })
}
