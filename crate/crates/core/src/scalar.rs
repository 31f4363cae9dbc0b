//! Weight arithmetic.
//!
//! Every measure carries its weights either as exact rationals or as `f64`.
//! The mode is a type parameter, so mixing the two in one computation does
//! not compile. Conversions between modes are explicit (`from_f64`,
//! `to_rational`, `to_f64`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational numbers backed by big integers.
pub type Rational = BigRational;

/// Which arithmetic a measure uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    Rational,
    Float,
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightMode::Rational => f.write_str("rational"),
            WeightMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(WeightMode::Rational),
            "float" => Ok(WeightMode::Float),
            other => Err(Error::Format(format!("unknown mode {other:?}"))),
        }
    }
}

/// Tolerance used for normalisation and point identity in float mode.
pub const FLOAT_MASS_TOL: f64 = 1e-12;
/// Tolerance used by the float simplex and optimality gaps.
pub const FLOAT_LP_TOL: f64 = 1e-9;

/// Ordered field used for weights, plan entries and aggregated costs.
///
/// The `tol_*` comparisons ignore the tolerance in rational mode.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: WeightMode;
    /// Coordinate tolerance for point identity in this mode.
    const POINT_TOL: f64;

    /// Exact in rational mode. Panics on non-finite input.
    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> Rational;

    /// `self == other`, up to `tol` in float mode.
    fn tol_eq(&self, other: &Self, tol: f64) -> bool;
    /// `self < other - tol` in float mode, `self < other` in rational mode.
    fn tol_lt(&self, other: &Self, tol: f64) -> bool;

    fn tol_is_zero(&self, tol: f64) -> bool {
        self.tol_eq(&Self::zero(), tol)
    }
    fn tol_is_positive(&self, tol: f64) -> bool {
        Self::zero().tol_lt(self, tol)
    }

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const MODE: WeightMode = WeightMode::Float;
    const POINT_TOL: f64 = FLOAT_MASS_TOL;

    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar {x}");
        x
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite float")
    }
    fn tol_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
    fn tol_lt(&self, other: &Self, tol: f64) -> bool {
        *self < *other - tol
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("bad number {n}"))),
            Value::String(s) => Ok(rational_to_f64(&parse_rational(s)?)),
            other => Err(Error::Format(format!("expected number, got {other}"))),
        }
    }
}

impl Scalar for Rational {
    const MODE: WeightMode = WeightMode::Rational;
    const POINT_TOL: f64 = 0.0;

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(|| panic!("non-finite scalar {x}"))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn tol_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn tol_lt(&self, other: &Self, _tol: f64) -> bool {
        self < other
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(BigInt::from(i)))
                } else {
                    let x = n.as_f64().ok_or_else(|| Error::Format(format!("bad number {n}")))?;
                    Ok(Rational::from_f64(x))
                }
            }
            other => Err(Error::Format(format!("expected \"p/q\", got {other}"))),
        }
    }
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        // i64 -> f64 is exact below 2^53, and one correctly rounded division
        // then gives the nearest float.
        if n.unsigned_abs() < (1 << 53) && d < (1 << 53) {
            return n as f64 / d as f64;
        }
    }
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Always `p/q`, including `1/1`, so that rational weights are unambiguous
/// strings on the wire.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or an integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`.
///
/// Walks the continued fraction expansion and then picks the better of the
/// last convergent and the largest admissible semiconvergent.
pub fn limit_denominator(x: &Rational, max_den: &BigInt) -> Rational {
    assert!(max_den.is_positive(), "max_den must be positive");
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rational_round_trips_through_json() {
        let r = q(-6, 4);
        assert_eq!(r.to_json(), Value::String("-3/2".into()));
        assert_eq!(Rational::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn float_to_rational_is_exact() {
        let r = Rational::from_f64(0.1);
        assert_eq!(rational_to_f64(&r), 0.1);
        assert_ne!(r, q(1, 10));
    }

    #[test]
    fn correctly_rounded_ratio_matches_division() {
        for m in 1..40i64 {
            for j in 0..m {
                let a = rational_to_f64(&q(j * 3, m * 3));
                assert_eq!(a, j as f64 / m as f64);
            }
        }
    }

    #[test]
    fn limit_denominator_matches_known_approximations() {
        let pi = Rational::from_f64(std::f64::consts::PI);
        assert_eq!(limit_denominator(&pi, &BigInt::from(10)), q(22, 7));
        assert_eq!(limit_denominator(&pi, &BigInt::from(200)), q(355, 113));
        assert_eq!(limit_denominator(&q(1, 3), &BigInt::from(5)), q(1, 3));
        // semiconvergent case: best approximation of 0.3 with den <= 4 is 1/3
        assert_eq!(limit_denominator(&q(3, 10), &BigInt::from(4)), q(1, 3));
    }

    #[test]
    fn limit_denominator_error_is_below_inverse_bound() {
        let x = Rational::from_f64(1.0 / std::f64::consts::PI);
        for d in [1i64, 2, 5, 17, 100, 1000, 10_000] {
            let a = limit_denominator(&x, &BigInt::from(d));
            assert!(a.denom() <= &BigInt::from(d));
            let err = (&a - &x).abs();
            assert!(err < q(1, d), "den {d}: err {err}");
        }
    }

    #[test]
    fn tolerance_comparisons() {
        assert!(1.0f64.tol_eq(&(1.0 + 1e-13), FLOAT_MASS_TOL));
        assert!(!1.0f64.tol_lt(&(1.0 + 1e-13), FLOAT_MASS_TOL));
        assert!(q(1, 3).tol_lt(&q(1, 2), 1.0));
        assert!(!q(1, 3).tol_eq(&q(1, 2), 1.0));
    }
}
