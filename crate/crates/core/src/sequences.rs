//! Exact generation of the combinatorial sequences `c(n)`.
//!
//! Every supported family is integer valued. Values are produced as exact
//! rationals from their factorial-ratio definitions and reduced; the reduced
//! denominator is always 1, which the tests check for `n ≤ 40` rather than
//! assuming it. Conversion to `f64` (see [`ExactValue::to_f64`]) rounds to
//! nearest, ties to even.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The ten worked examples whose weight functions are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Example {
    /// `(2n)!`
    DoubleFactorialEven,
    /// `(2n)!/n!`
    Ex2,
    /// `C(2n, n)`
    CentralBinomial,
    /// `C(2n, n)/(n+1)`
    Catalan,
    /// `(2n)!/(n+1)!`
    Ex5,
    /// `(2n)!/(n+1)`
    Ex6,
    /// `(3n)!/n!`
    Ex7,
    /// `(3n)!/(2n)!`
    Ex8,
    /// `(3n)!/(n!)³`
    MiddleTrinomial,
    /// `C(3n, n)/(2n+1)`
    Ex10,
}

impl Example {
    pub const ALL: [Example; 10] = [
        Example::DoubleFactorialEven,
        Example::Ex2,
        Example::CentralBinomial,
        Example::Catalan,
        Example::Ex5,
        Example::Ex6,
        Example::Ex7,
        Example::Ex8,
        Example::MiddleTrinomial,
        Example::Ex10,
    ];

    /// The example number, 1 through 10.
    pub fn number(self) -> u8 {
        Example::ALL.iter().position(|&e| e == self).unwrap() as u8 + 1
    }

    pub fn from_number(number: u8) -> Option<Self> {
        (1..=10)
            .contains(&number)
            .then(|| Example::ALL[number as usize - 1])
    }
}

/// Identifies one of the supported sequences `c(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceId {
    /// `n!`, the sequence of the standard coherent state.
    FactorialBaseline,
    Example(Example),
    /// Bell numbers `B(n)`.
    Bell,
    /// `c(n)·B(n)` for one of the examples.
    Product(Example),
}

impl From<Example> for SequenceId {
    fn from(e: Example) -> Self {
        SequenceId::Example(e)
    }
}

impl SequenceId {
    pub const CATALAN: SequenceId = SequenceId::Example(Example::Catalan);
    pub const CENTRAL_BINOMIAL: SequenceId = SequenceId::Example(Example::CentralBinomial);
    pub const MIDDLE_TRINOMIAL: SequenceId = SequenceId::Example(Example::MiddleTrinomial);

    /// Every non-product id, followed by the Catalan–Bell product.
    pub fn all() -> Vec<SequenceId> {
        let mut ids = vec![SequenceId::FactorialBaseline];
        ids.extend(Example::ALL.iter().map(|&e| SequenceId::Example(e)));
        ids.push(SequenceId::Bell);
        ids.push(SequenceId::Product(Example::Catalan));
        ids
    }

    /// Help text listing the accepted spellings.
    pub fn valid_names() -> &'static str {
        "factorial, ex1..ex10, centralbinomial (= ex3), catalan (= ex4), \
         middletrinomial (= ex9), bell, product:<ex>*bell (e.g. product:catalan*bell)"
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::FactorialBaseline => f.write_str("factorial"),
            SequenceId::Example(e) => write!(f, "ex{}", e.number()),
            SequenceId::Bell => f.write_str("bell"),
            SequenceId::Product(e) => write!(f, "product:ex{}*bell", e.number()),
        }
    }
}

fn parse_example(s: &str) -> Option<Example> {
    match s {
        "centralbinomial" => Some(Example::CentralBinomial),
        "catalan" => Some(Example::Catalan),
        "middletrinomial" => Some(Example::MiddleTrinomial),
        _ => s
            .strip_prefix("ex")
            .and_then(|d| d.parse::<u8>().ok())
            .and_then(Example::from_number),
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let id = match lower.as_str() {
            "factorial" => Some(SequenceId::FactorialBaseline),
            "bell" => Some(SequenceId::Bell),
            other => match other.strip_prefix("product:") {
                Some(rest) => rest
                    .strip_suffix("*bell")
                    .and_then(parse_example)
                    .map(SequenceId::Product),
                None => parse_example(other).map(SequenceId::Example),
            },
        };
        id.ok_or_else(|| {
            Error::Parse(format!(
                "unknown sequence id '{s}'; valid ids: {}",
                SequenceId::valid_names()
            ))
        })
    }
}

impl Serialize for SequenceId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SequenceId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact non-negative rational.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn new(value: BigRational) -> Self {
        ExactValue(value)
    }

    pub fn from_integer(value: BigUint) -> Self {
        ExactValue(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Round-to-nearest (ties to even) conversion.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    /// Natural logarithm, usable when the value is outside the `f64` range.
    pub fn ln(&self) -> f64 {
        let (num, den) = (self.0.numer(), self.0.denom());
        if num.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_ln(num.magnitude()) - big_ln(den.magnitude())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an exact rational: '{s}'"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(ExactValue(BigRational::new(num, den)))
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Correctly rounded `num/den` as `f64`.
///
/// The quotient is formed with at least 65 significant bits; the remainder
/// and any discarded low bits fold into a sticky bit below the rounding
/// position, so the final `u64 → f64` conversion rounds exactly once.
pub(crate) fn rational_to_f64(value: &BigRational) -> f64 {
    let num = value.numer();
    let den = value.denom();
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let a = num.magnitude();
    let b = den.magnitude();

    let k = 65 + b.bits() as i64 - a.bits() as i64;
    let (q, r) = if k >= 0 {
        let scaled = a << (k as usize);
        (&scaled / b, &scaled % b)
    } else {
        let scaled = b << ((-k) as usize);
        (a / &scaled, a % &scaled)
    };
    let mut sticky = !r.is_zero();
    let drop = q.bits().saturating_sub(64);
    if drop > 0 && q.trailing_zeros().unwrap_or(0) < drop {
        sticky = true;
    }
    let top = (&q >> drop).to_u64().unwrap() | sticky as u64;
    let mut out = top as f64;
    // multiply by 2^(drop - k) in two steps to avoid intermediate overflow
    let mut e = drop as i64 - k;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        out *= 2f64.powi(step as i32);
        e -= step;
    }
    if negative {
        -out
    } else {
        out
    }
}

struct Factorials(Vec<BigUint>);

impl Factorials {
    fn up_to(m: usize) -> Self {
        let mut table = Vec::with_capacity(m + 1);
        table.push(BigUint::one());
        for i in 1..=m {
            let next = &table[i - 1] * BigUint::from(i);
            table.push(next);
        }
        Factorials(table)
    }

    fn get(&self, m: usize) -> BigInt {
        BigInt::from(self.0[m].clone())
    }
}

fn ratio(num: BigInt, den: BigInt) -> ExactValue {
    let value = BigRational::new(num, den);
    debug_assert!(value.is_integer(), "sequence value is not an integer");
    ExactValue(value)
}

fn example_value(e: Example, n: usize, f: &Factorials) -> ExactValue {
    let big = |v: usize| BigInt::from(v);
    match e {
        Example::DoubleFactorialEven => ratio(f.get(2 * n), BigInt::one()),
        Example::Ex2 => ratio(f.get(2 * n), f.get(n)),
        Example::CentralBinomial => ratio(f.get(2 * n), f.get(n) * f.get(n)),
        Example::Catalan => ratio(f.get(2 * n), f.get(n) * f.get(n) * big(n + 1)),
        Example::Ex5 => ratio(f.get(2 * n), f.get(n + 1)),
        Example::Ex6 => ratio(f.get(2 * n), big(n + 1)),
        Example::Ex7 => ratio(f.get(3 * n), f.get(n)),
        Example::Ex8 => ratio(f.get(3 * n), f.get(2 * n)),
        Example::MiddleTrinomial => ratio(f.get(3 * n), f.get(n) * f.get(n) * f.get(n)),
        Example::Ex10 => ratio(f.get(3 * n), f.get(n) * f.get(2 * n) * big(2 * n + 1)),
    }
}

/// Bell numbers `B(0..=n_max)` from the Bell triangle.
fn bell_prefix(n_max: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut row = vec![BigUint::one()];
    out.push(BigUint::one());
    for _ in 1..=n_max {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for entry in &row {
            let v = next.last().unwrap() + entry;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

/// `c(0), …, c(n_max)` for the given sequence.
pub fn seq_values(id: SequenceId, n_max: u32) -> Vec<ExactValue> {
    let n_max = n_max as usize;
    match id {
        SequenceId::FactorialBaseline => {
            let f = Factorials::up_to(n_max);
            f.0.into_iter().map(ExactValue::from_integer).collect()
        }
        SequenceId::Example(e) => {
            let f = Factorials::up_to(3 * n_max + 1);
            (0..=n_max).map(|n| example_value(e, n, &f)).collect()
        }
        SequenceId::Bell => bell_prefix(n_max)
            .into_iter()
            .map(ExactValue::from_integer)
            .collect(),
        SequenceId::Product(e) => {
            let inner = seq_values(SequenceId::Example(e), n_max as u32);
            inner
                .into_iter()
                .zip(bell_prefix(n_max))
                .map(|(c, b)| ExactValue(c.0 * BigRational::from_integer(BigInt::from(b))))
                .collect()
        }
    }
}

/// The exact value `c(n)`. `c(0) = 1` for every id.
pub fn seq_value(id: SequenceId, n: u32) -> ExactValue {
    match id {
        SequenceId::Example(e) => {
            let f = Factorials::up_to(3 * n as usize + 1);
            example_value(e, n as usize, &f)
        }
        _ => seq_values(id, n).pop().unwrap(),
    }
}

/// Closed-form `c(n)/c(n-1)` for `n ≥ 1`, as a rational function of `n`.
///
/// This is a second route to the spectrum that never touches the big
/// factorials; it is `None` for Bell and product sequences, whose ratios
/// have no such form.
pub fn step_ratio(id: SequenceId, n: u32) -> Option<BigRational> {
    if n == 0 {
        return None;
    }
    let (num, den) = step_ratio_parts(id, n as i64)?;
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `f64` version of [`step_ratio`], used to step the normalization series.
pub fn step_ratio_f64(id: SequenceId, n: u32) -> Option<f64> {
    let n = n as f64;
    let r = match id {
        SequenceId::FactorialBaseline => n,
        SequenceId::Example(e) => match e {
            Example::DoubleFactorialEven => 2.0 * n * (2.0 * n - 1.0),
            Example::Ex2 => 2.0 * (2.0 * n - 1.0),
            Example::CentralBinomial => 2.0 * (2.0 * n - 1.0) / n,
            Example::Catalan => 2.0 * (2.0 * n - 1.0) / (n + 1.0),
            Example::Ex5 => 2.0 * n * (2.0 * n - 1.0) / (n + 1.0),
            Example::Ex6 => 2.0 * n * n * (2.0 * n - 1.0) / (n + 1.0),
            Example::Ex7 => 3.0 * (3.0 * n - 1.0) * (3.0 * n - 2.0),
            Example::Ex8 => 3.0 * (3.0 * n - 1.0) * (3.0 * n - 2.0) / (2.0 * (2.0 * n - 1.0)),
            Example::MiddleTrinomial => 3.0 * (3.0 * n - 1.0) * (3.0 * n - 2.0) / (n * n),
            Example::Ex10 => 3.0 * (3.0 * n - 1.0) * (3.0 * n - 2.0) / (2.0 * n * (2.0 * n + 1.0)),
        },
        _ => return None,
    };
    (n >= 1.0).then_some(r)
}

fn step_ratio_parts(id: SequenceId, n: i64) -> Option<(i128, i128)> {
    let n = n as i128;
    let parts = match id {
        SequenceId::FactorialBaseline => (n, 1),
        SequenceId::Example(e) => match e {
            Example::DoubleFactorialEven => (2 * n * (2 * n - 1), 1),
            Example::Ex2 => (2 * (2 * n - 1), 1),
            Example::CentralBinomial => (2 * (2 * n - 1), n),
            Example::Catalan => (2 * (2 * n - 1), n + 1),
            Example::Ex5 => (2 * n * (2 * n - 1), n + 1),
            Example::Ex6 => (2 * n * n * (2 * n - 1), n + 1),
            Example::Ex7 => (3 * (3 * n - 1) * (3 * n - 2), 1),
            Example::Ex8 => (3 * (3 * n - 1) * (3 * n - 2), 2 * (2 * n - 1)),
            Example::MiddleTrinomial => (3 * (3 * n - 1) * (3 * n - 2), n * n),
            Example::Ex10 => (3 * (3 * n - 1) * (3 * n - 2), 2 * n * (2 * n + 1)),
        },
        _ => return None,
    };
    Some(parts)
}

/// Energy levels `ε₀ = 0`, `εₙ = c(n)/c(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub epsilon: Vec<ExactValue>,
}

pub fn spectrum(id: SequenceId, n_max: u32) -> Spectrum {
    let values = seq_values(id, n_max);
    let mut epsilon = Vec::with_capacity(values.len());
    epsilon.push(ExactValue(BigRational::zero()));
    for pair in values.windows(2) {
        epsilon.push(ExactValue(pair[1].as_rational() / pair[0].as_rational()));
    }
    Spectrum { epsilon }
}

/// The radius of convergence `R` of `Σ xⁿ/c(n)`; `f64::INFINITY` when unbounded.
///
/// Product sequences are offered for moment verification only and are
/// rejected here.
pub fn radius_of_convergence(id: SequenceId) -> Result<f64> {
    Ok(match id {
        SequenceId::Example(Example::CentralBinomial) | SequenceId::Example(Example::Catalan) => {
            4.0
        }
        SequenceId::Example(Example::MiddleTrinomial) => 27.0,
        SequenceId::Example(Example::Ex10) => 27.0 / 4.0,
        SequenceId::Example(_) | SequenceId::FactorialBaseline | SequenceId::Bell => f64::INFINITY,
        SequenceId::Product(_) => {
            return Err(Error::Unsupported(format!(
                "{id} is available for moment verification only; no radius is provided"
            )))
        }
    })
}

/// Hard cap on the number of Dobinski terms.
pub const DOBINSKI_CAP: usize = 10_000;

/// Partial Dobinski sum `(1/e) Σ_{k=0..K} kⁿ/k!` with `0⁰ = 1`.
///
/// `K` is the first index at which the geometric bound on the remaining tail
/// drops below `tail_tol`. The term ratio `(1 + 1/k)ⁿ/(k + 1)` decreases in
/// `k`, so once it is below one the tail after `K` is at most
/// `t_{K+1} / (1 - r_{K+1})`. Returns the sum and `K`.
pub fn dobinski_partial(n: u32, tail_tol: f64) -> Result<(f64, usize)> {
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tail_tol must be positive, got {tail_tol}"
        )));
    }
    let inv_e = (-1.0f64).exp();
    let pow = n as i32;
    let step = |k: f64| (1.0 + 1.0 / k).powi(pow) / (k + 1.0);

    let mut sum = if n == 0 { 1.0 } else { 0.0 };
    let mut term = 1.0;
    for k in 1..=DOBINSKI_CAP {
        sum += term;
        let kf = k as f64;
        let next = term * step(kf);
        let r_next = step(kf + 1.0);
        if r_next < 1.0 && next / (1.0 - r_next) * inv_e < tail_tol {
            return Ok((sum * inv_e, k));
        }
        if !next.is_finite() {
            break;
        }
        term = next;
    }
    Err(Error::TruncationFailure {
        what: format!("Dobinski sum for n = {n}"),
        cap: DOBINSKI_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn int(v: u64) -> ExactValue {
        ExactValue::from_integer(BigUint::from(v))
    }

    fn frac(p: i64, q: i64) -> ExactValue {
        ExactValue(BigRational::new(p.into(), q.into()))
    }

    // Independent oracles: u128 binomials and the binomial Bell recurrence.
    fn binom(n: u128, k: u128) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    }

    fn bell_oracle(n_max: usize) -> Vec<u128> {
        let mut b = vec![1u128];
        for n in 0..n_max {
            let next = (0..=n).map(|k| binom(n as u128, k as u128) * b[k]).sum();
            b.push(next);
        }
        b
    }

    #[test]
    fn known_values() {
        assert_eq!(seq_value(SequenceId::CATALAN, 0), int(1));
        assert_eq!(
            seq_value(SequenceId::CATALAN, 4),
            int(binom(8, 4) as u64 / 5)
        );
        assert_eq!(seq_value(SequenceId::Bell, 5), int(52));
        assert_eq!(seq_value(Example::Ex7.into(), 2), int(720 / 2));
        assert_eq!(seq_value(SequenceId::Product(Example::Catalan), 3), int(25));
    }

    #[test]
    fn bell_matches_binomial_recurrence() {
        let oracle = bell_oracle(30);
        let values = seq_values(SequenceId::Bell, 30);
        for (n, (v, o)) in values.iter().zip(&oracle).enumerate() {
            assert_eq!(v.as_rational().numer().to_u128().unwrap(), *o, "n = {n}");
        }
    }

    #[test]
    fn binomial_families_match_u128_oracle() {
        for n in 0..=15u128 {
            let c = |e: Example| {
                seq_value(e.into(), n as u32)
                    .as_rational()
                    .numer()
                    .to_u128()
                    .unwrap()
            };
            assert_eq!(c(Example::CentralBinomial), binom(2 * n, n));
            assert_eq!(c(Example::Catalan), binom(2 * n, n) / (n + 1));
            assert_eq!(
                c(Example::MiddleTrinomial),
                binom(3 * n, n) * binom(2 * n, n)
            );
            assert_eq!(c(Example::Ex10), binom(3 * n, n) / (2 * n + 1));
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(SequenceId::FactorialBaseline, 5);
        assert_eq!(s.epsilon, (0..=5).map(int).collect::<Vec<_>>());
        let s = spectrum(Example::DoubleFactorialEven.into(), 2);
        assert_eq!(s.epsilon, vec![int(0), int(2), int(12)]);
        let s = spectrum(SequenceId::CATALAN, 3);
        assert_eq!(s.epsilon, vec![int(0), int(1), int(2), frac(5, 2)]);
    }

    #[test]
    fn radii() {
        assert_eq!(
            radius_of_convergence(SequenceId::CENTRAL_BINOMIAL).unwrap(),
            4.0
        );
        assert_eq!(
            radius_of_convergence(SequenceId::MIDDLE_TRINOMIAL).unwrap(),
            27.0
        );
        assert_eq!(radius_of_convergence(Example::Ex10.into()).unwrap(), 6.75);
        assert!(radius_of_convergence(Example::DoubleFactorialEven.into())
            .unwrap()
            .is_infinite());
        assert!(radius_of_convergence(SequenceId::Bell)
            .unwrap()
            .is_infinite());
        assert!(matches!(
            radius_of_convergence(SequenceId::Product(Example::Catalan)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn dobinski_examples() {
        let (v, _) = dobinski_partial(0, 1e-12).unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
        let (v, _) = dobinski_partial(3, 1e-12).unwrap();
        assert!((v - 5.0).abs() <= 1e-12);
        let (v, k) = dobinski_partial(12, 1e-10).unwrap();
        assert!((v / 4_213_597.0 - 1.0).abs() <= 1e-3);
        assert!(k > 12);
    }

    #[test]
    fn dobinski_rejects_bad_tolerance() {
        assert!(dobinski_partial(3, 0.0).is_err());
        assert!(dobinski_partial(3, f64::NAN).is_err());
    }

    #[test]
    fn dobinski_hits_cap_for_huge_n() {
        // terms overflow long before the tail bound can be met
        assert!(matches!(
            dobinski_partial(400, 1e-12),
            Err(Error::TruncationFailure { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        for id in SequenceId::all() {
            assert_eq!(id.to_string().parse::<SequenceId>().unwrap(), id);
        }
        assert_eq!(
            "catalan".parse::<SequenceId>().unwrap(),
            SequenceId::CATALAN
        );
        assert_eq!(
            "CentralBinomial".parse::<SequenceId>().unwrap(),
            SequenceId::CENTRAL_BINOMIAL
        );
        assert_eq!(
            "product:catalan*bell".parse::<SequenceId>().unwrap(),
            SequenceId::Product(Example::Catalan)
        );
        let err = "nosuch".parse::<SequenceId>().unwrap_err().to_string();
        assert!(err.contains("ex1..ex10") && err.contains("bell"));
        assert!("ex11".parse::<SequenceId>().is_err());
        assert!("product:bell*bell".parse::<SequenceId>().is_err());
    }

    #[test]
    fn to_f64_rounds_to_nearest() {
        // 2^53 + 1 is a tie between 2^53 and 2^53 + 2; ties go to even.
        let v = int((1u64 << 53) + 1);
        assert_eq!(v.to_f64(), (1u64 << 53) as f64);
        let v = int((1u64 << 53) + 3);
        assert_eq!(v.to_f64(), ((1u64 << 53) + 4) as f64);
        // just above the tie rounds up
        let v = ExactValue(BigRational::new(
            BigInt::from((1u64 << 54) + 3),
            BigInt::from(2),
        ));
        assert_eq!(v.to_f64(), ((1u64 << 53) + 2) as f64);
        assert_eq!(frac(1, 3).to_f64(), 1.0 / 3.0);
        assert_eq!(frac(5, 2).to_f64(), 2.5);
        assert_eq!(frac(-7, 4).to_f64(), -1.75);
    }

    #[test]
    fn to_f64_matches_float_parse_for_large_values() {
        let v = seq_value(SequenceId::MIDDLE_TRINOMIAL, 40);
        let parsed: f64 = v.to_string().parse().unwrap();
        assert_eq!(v.to_f64(), parsed);
        assert!((v.ln() - parsed.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn values_are_positive_integers(idx in 0usize..13, n in 0u32..=40) {
            let id = SequenceId::all()[idx];
            let v = seq_value(id, n);
            prop_assert!(v.is_integer());
            prop_assert!(v.as_rational().is_positive());
        }

        #[test]
        fn strictly_increasing_after_one(idx in 0usize..13, n in 1u32..40) {
            let id = SequenceId::all()[idx];
            prop_assert!(seq_value(id, n + 1) > seq_value(id, n));
        }

        #[test]
        fn spectrum_times_previous_is_next(idx in 0usize..13, n_max in 1u32..30) {
            let id = SequenceId::all()[idx];
            let eps = spectrum(id, n_max).epsilon;
            let values = seq_values(id, n_max);
            prop_assert!(eps[0].as_rational().is_zero());
            for n in 1..=n_max as usize {
                prop_assert!(eps[n].as_rational().is_positive());
                prop_assert_eq!(eps[n].as_rational() * values[n - 1].as_rational(), values[n].as_rational().clone());
            }
        }

        #[test]
        fn closed_form_ratio_matches_exact(idx in 0usize..11, n in 1u32..60) {
            let id = SequenceId::all()[idx];
            let exact = seq_value(id, n).into_rational() / seq_value(id, n - 1).into_rational();
            prop_assert_eq!(step_ratio(id, n).unwrap(), exact.clone());
            let f = step_ratio_f64(id, n).unwrap();
            prop_assert!((f / rational_to_f64(&exact) - 1.0).abs() < 1e-14);
        }

        #[test]
        fn product_is_inner_times_bell(e in 0usize..10, n in 0u32..=30) {
            let ex = Example::ALL[e];
            let lhs = seq_value(SequenceId::Product(ex), n);
            let rhs = seq_value(ex.into(), n).into_rational() * seq_value(SequenceId::Bell, n).into_rational();
            prop_assert_eq!(lhs.into_rational(), rhs);
        }

        #[test]
        fn dobinski_converges_to_bell(n in 0u32..=15, exp in 6i32..=13) {
            let t = 10f64.powi(-exp);
            let (v, _) = dobinski_partial(n, t).unwrap();
            let b = seq_value(SequenceId::Bell, n).to_f64();
            prop_assert!((v - b).abs() / b <= 10.0 * t, "n={} t={} v={} b={}", n, t, v, b);
        }
    }
}
