use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::measures::{DiscreteCoupling, DiscreteMeasure, FactorSpace, Point};
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Rotation angle: an exact fraction `p/q` or a real number standing in for
/// an irrational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    Rational { p: i64, q: i64 },
    Real(f64),
}

impl Alpha {
    /// `√2 - 1`.
    pub fn sqrt2m1() -> Self {
        Alpha::Real(std::f64::consts::SQRT_2 - 1.0)
    }

    /// `(√5 - 1) / 2`, the fractional part of the golden ratio.
    pub fn golden() -> Self {
        Alpha::Real((5f64.sqrt() - 1.0) / 2.0)
    }

    /// Reduced fraction with `0 <= p < q`.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidArgument(format!("bad denominator {q}")));
        }
        let g = p.gcd(&q);
        Ok(Alpha::Rational {
            p: (p / g).rem_euclid(q / g),
            q: q / g,
        })
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Alpha::Rational { p, q } => p as f64 / q as f64,
            Alpha::Real(a) => a,
        }
    }

    /// `frac(i/m + α)`. Exact fractions are rounded once, so equal reals
    /// give equal floats.
    fn rotate(&self, i: i64, m: i64) -> f64 {
        match *self {
            Alpha::Rational { p, q } => grid_point((i * q + p * m).rem_euclid(m * q), m * q),
            Alpha::Real(a) => {
                let y = (i as f64 / m as f64 + a).fract();
                if y < 0.0 {
                    y + 1.0
                } else {
                    y
                }
            }
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("bad alpha {s:?}: use sqrt2m1, golden, p/q or a decimal"));
        match s.trim() {
            "sqrt2m1" => Ok(Alpha::sqrt2m1()),
            "golden" => Ok(Alpha::golden()),
            t => match t.split_once('/') {
                Some((p, q)) => Alpha::rational(
                    p.trim().parse().map_err(|_| bad())?,
                    q.trim().parse().map_err(|_| bad())?,
                ),
                None => {
                    let x: f64 = t.parse().map_err(|_| bad())?;
                    if x.is_finite() {
                        Ok(Alpha::Real(x))
                    } else {
                        Err(bad())
                    }
                }
            },
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Rational { p, q } => write!(f, "{p}/{q}"),
            Alpha::Real(a) => write!(f, "{a}"),
        }
    }
}

/// `j / d`, correctly rounded.
pub(crate) fn grid_point(j: i64, d: i64) -> f64 {
    rational_to_f64(&Rational::from_ratio(j, d))
}

fn unit() -> FactorSpace {
    FactorSpace::interval(0.0, 1.0).expect("valid interval")
}

/// Uniform plan on `{(i/m, frac(i/m + α)) : 0 <= i < m}` in `[0, 1]^2`.
pub fn rotation_plan<W: Scalar>(alpha: Alpha, m: usize) -> Result<DiscreteCoupling<W>> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let m = m as i64;
    let tuples = (0..m)
        .map(|i| vec![Point::scalar(grid_point(i, m)), Point::scalar(alpha.rotate(i, m))])
        .collect();
    DiscreteCoupling::uniform(vec![unit(), unit()], tuples)
}

/// Uniform measure on the grid `{i/m : 0 <= i < m}` of `[0, 1]`.
pub fn uniform_grid<W: Scalar>(m: usize) -> Result<DiscreteMeasure<W>> {
    let m = m as i64;
    DiscreteMeasure::uniform(unit(), (0..m).map(|i| Point::scalar(grid_point(i, m))).collect())
}

/// The identity plan on the `m`-grid.
pub fn diagonal_plan<W: Scalar>(m: usize) -> Result<DiscreteCoupling<W>> {
    rotation_plan(Alpha::Rational { p: 0, q: 1 }, m)
}

/// `x ↦ x + shift` on the `m`-grid of `[0, 1]`, as a plan on
/// `[0, 1] × [0, 1 + shift]`. Its quadratic cost is `shift²`.
pub fn shift_plan<W: Scalar>(m: usize, shift: Rational) -> Result<DiscreteCoupling<W>> {
    let hi = rational_to_f64(&(Rational::from_ratio(1, 1) + &shift));
    let target = FactorSpace::interval(0.0, hi)?;
    let m = m as i64;
    let tuples = (0..m)
        .map(|i| {
            let x = Rational::from_ratio(i, m);
            vec![
                Point::scalar(rational_to_f64(&x)),
                Point::scalar(rational_to_f64(&(x + &shift))),
            ]
        })
        .collect();
    DiscreteCoupling::uniform(vec![unit(), target], tuples)
}
