//! Cost functions and the two objectives: the integral `C[γ] = Σ w c` and
//! the supremum `C∞[γ] = max over the support of c`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::measures::{DiscreteCoupling, FactorSpace, Point};
use crate::scalar::Scalar;

/// Which objective a problem, audit or certificate uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Integral cost, aggregated by summation.
    Sum,
    /// Essential supremum, aggregated by maximum.
    Max,
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Objective::Sum),
            "max" => Ok(Objective::Max),
            other => Err(Error::Format(format!("unknown objective {other:?}"))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Sum => "sum",
            Objective::Max => "max",
        })
    }
}

/// A cost value, possibly `+∞`. Never NaN.
#[derive(Clone, Debug, PartialEq)]
pub enum CostValue<W> {
    Finite(W),
    Infinite,
}

impl<W: Scalar> CostValue<W> {
    pub fn zero() -> Self {
        CostValue::Finite(W::zero())
    }

    /// Lifts a raw `f64` cost (exactly, in rational mode).
    pub fn from_raw(c: f64) -> Self {
        if c == f64::INFINITY {
            CostValue::Infinite
        } else {
            CostValue::Finite(W::from_f64(c))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CostValue::Infinite)
    }

    pub fn finite(&self) -> Option<&W> {
        match self {
            CostValue::Finite(w) => Some(w),
            CostValue::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CostValue::Finite(w) => w.to_f64(),
            CostValue::Infinite => f64::INFINITY,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn scale(&self, w: &W) -> Self {
        match self {
            CostValue::Finite(v) => CostValue::Finite(v.clone() * w.clone()),
            CostValue::Infinite => CostValue::Infinite,
        }
    }

    /// `self < other`, strictly, with the float-mode tolerance applied to
    /// finite values.
    pub fn tol_lt(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.tol_lt(b, tol),
            (CostValue::Finite(_), CostValue::Infinite) => true,
            _ => false,
        }
    }

    /// `self - other` when both are finite; zero when both are infinite.
    pub fn gap(&self, other: &Self) -> Option<W> {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => Some(a.clone() - b.clone()),
            (CostValue::Infinite, CostValue::Infinite) => Some(W::zero()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CostValue::Finite(w) => w.to_json(),
            CostValue::Infinite => Value::String("inf".into()),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "inf" => Ok(CostValue::Infinite),
            other => Ok(CostValue::Finite(W::from_json(other)?)),
        }
    }
}

impl<W: Scalar> PartialOrd for CostValue<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.partial_cmp(b),
            (CostValue::Finite(_), CostValue::Infinite) => Some(Ordering::Less),
            (CostValue::Infinite, CostValue::Finite(_)) => Some(Ordering::Greater),
            (CostValue::Infinite, CostValue::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<W: Scalar> Add for CostValue<W> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Infinite,
        }
    }
}

impl<W: Scalar> fmt::Display for CostValue<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(w) => write!(f, "{w}"),
            CostValue::Infinite => f.write_str("inf"),
        }
    }
}

/// An explicit cost tensor indexed by per-marginal atom indices.
///
/// `axes[k]` lists the points that index axis `k`; when absent the tensor
/// can only be evaluated through [`CostSpec::eval_indexed`] or after
/// [`CostSpec::bind_axes`].
#[derive(Clone, Debug, PartialEq)]
pub struct TensorCost {
    shape: Vec<usize>,
    /// Row-major; `f64::INFINITY` encodes `+∞`.
    values: Vec<f64>,
    axes: Option<Vec<Vec<Point>>>,
}

impl TensorCost {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if shape.len() < 2 || shape.contains(&0) {
            return Err(Error::InvalidCost(format!("bad tensor shape {shape:?}")));
        }
        if shape.iter().product::<usize>() != values.len() {
            return Err(Error::InvalidCost("tensor size does not match shape".into()));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::InvalidCost("tensor values must be finite or +inf".into()));
        }
        Ok(TensorCost {
            shape,
            values,
            axes: None,
        })
    }

    /// A two-marginal tensor from a matrix.
    pub fn matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCost("ragged matrix".into()));
        }
        Self::new(vec![m, n], rows.into_iter().flatten().collect())
    }

    pub fn with_axes(mut self, axes: Vec<Vec<Point>>) -> Result<Self> {
        if axes.len() != self.shape.len() || axes.iter().zip(&self.shape).any(|(a, s)| a.len() != *s) {
            return Err(Error::InvalidCost("axes do not match tensor shape".into()));
        }
        self.axes = Some(axes);
        Ok(self)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn axes(&self) -> Option<&[Vec<Point>]> {
        self.axes.as_deref()
    }

    fn at(&self, idx: &[usize]) -> Result<f64> {
        if idx.len() != self.shape.len() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.len(),
                got: idx.len(),
            });
        }
        let mut flat = 0;
        for (i, s) in idx.iter().zip(&self.shape) {
            if i >= s {
                return Err(Error::IndexOutOfRange { index: i + 1, len: *s });
            }
            flat = flat * s + i;
        }
        Ok(self.values[flat])
    }

    fn locate(&self, tuple: &[Point], tol: f64) -> Result<Vec<usize>> {
        let axes = self
            .axes
            .as_ref()
            .ok_or_else(|| Error::InvalidCost("tensor cost has no axes; evaluate by atom index".into()))?;
        if tuple.len() != axes.len() {
            return Err(Error::DimensionMismatch {
                expected: axes.len(),
                got: tuple.len(),
            });
        }
        tuple
            .iter()
            .zip(axes)
            .map(|(p, axis)| {
                axis.iter()
                    .position(|q| q.same_as(p, tol))
                    .ok_or_else(|| Error::InvalidCost(format!("point {p} is not a tensor axis entry")))
            })
            .collect()
    }
}

/// A declarative cost function on `N`-tuples of points.
#[derive(Clone, Debug, PartialEq)]
pub enum CostSpec {
    /// `Σ_{i<j} |x^i - x^j|^p`; for two marginals this is `|x - y|^p`.
    PowerDistance {
        p: f64,
    },
    /// `Σ_{i<j} |x^i - x^j|^2`.
    SquaredSumBarycenter,
    /// `equal_value` when all points coincide, `unequal_value` otherwise.
    EqualityIndicator {
        equal_value: f64,
        unequal_value: f64,
    },
    Tensor(TensorCost),
}

fn pairwise(tuple: &[Point], mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    if tuple.len() < 2 {
        return Err(Error::InvalidCost("cost needs at least two points".into()));
    }
    let mut total = 0.0;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i].dim() != tuple[j].dim() {
                return Err(Error::DimensionMismatch {
                    expected: tuple[i].dim(),
                    got: tuple[j].dim(),
                });
            }
            total += f(tuple[i].distance(&tuple[j]));
        }
    }
    Ok(total)
}

impl CostSpec {
    pub fn power_distance(p: f64) -> Result<Self> {
        let c = CostSpec::PowerDistance { p };
        c.validate()?;
        Ok(c)
    }

    pub fn equality_indicator(equal_value: f64, unequal_value: f64) -> Result<Self> {
        let c = CostSpec::EqualityIndicator {
            equal_value,
            unequal_value,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CostSpec::PowerDistance { p } if !(p.is_finite() && *p > 0.0) => {
                Err(Error::InvalidCost(format!("power must be positive, got {p}")))
            }
            CostSpec::EqualityIndicator {
                equal_value,
                unequal_value,
            } if !(equal_value.is_finite() && unequal_value.is_finite()) || equal_value > unequal_value => Err(
                Error::InvalidCost("indicator values must be finite with equal <= unequal".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Raw cost of a tuple; `f64::INFINITY` for `+∞`. `point_tol` is the
    /// coordinate tolerance for point identity (zero in rational mode).
    pub fn eval(&self, tuple: &[Point], point_tol: f64) -> Result<f64> {
        match self {
            CostSpec::PowerDistance { p } => {
                let p = *p;
                pairwise(tuple, |d| if p == 2.0 { d * d } else { d.powf(p) })
            }
            CostSpec::SquaredSumBarycenter => pairwise(tuple, |d| d * d),
            CostSpec::EqualityIndicator {
                equal_value,
                unequal_value,
            } => {
                pairwise(tuple, |_| 0.0)?;
                let all_equal = tuple[1..].iter().all(|p| p.same_as(&tuple[0], point_tol));
                Ok(if all_equal { *equal_value } else { *unequal_value })
            }
            CostSpec::Tensor(t) => t.at(&t.locate(tuple, point_tol)?),
        }
    }

    /// Like [`eval`](Self::eval) but tensors are read at the given atom
    /// indices directly.
    pub fn eval_indexed(&self, tuple: &[Point], indices: &[usize], point_tol: f64) -> Result<f64> {
        match self {
            CostSpec::Tensor(t) => t.at(indices),
            other => other.eval(tuple, point_tol),
        }
    }

    /// Attaches axis points to an axis-less tensor; no-op otherwise.
    pub fn bind_axes(&mut self, axes: Vec<Vec<Point>>) -> Result<()> {
        if let CostSpec::Tensor(t) = self {
            if t.axes.is_none() {
                *t = t.clone().with_axes(axes)?;
            }
        }
        Ok(())
    }

    /// The same cost on a product of smaller supports. A tensor with axes is
    /// re-tabulated on the given points; other costs are returned as is.
    pub fn restricted_to(&self, axes: &[Vec<Point>], point_tol: f64) -> Result<CostSpec> {
        let CostSpec::Tensor(t) = self else {
            return Ok(self.clone());
        };
        if t.axes.is_none() {
            return Err(Error::InvalidCost("cannot restrict a tensor cost without axes".into()));
        }
        let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
        let mut values = Vec::with_capacity(shape.iter().product());
        let mut idx = vec![0usize; shape.len()];
        loop {
            let tuple: Vec<Point> = idx.iter().zip(axes).map(|(i, a)| a[*i].clone()).collect();
            values.push(self.eval(&tuple, point_tol)?);
            let mut k = shape.len();
            loop {
                if k == 0 {
                    let sub = TensorCost::new(shape, values)?.with_axes(axes.to_vec())?;
                    return Ok(CostSpec::Tensor(sub));
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            CostSpec::PowerDistance { .. } | CostSpec::SquaredSumBarycenter => true,
            CostSpec::EqualityIndicator {
                equal_value,
                unequal_value,
            } => equal_value == unequal_value,
            CostSpec::Tensor(_) => false,
        }
    }

    /// Upper bound on `|c(u) - c(z)|` over the product of `spaces` when every
    /// factor of `u` lies within Euclidean distance `h` of the matching
    /// factor of `z`. `None` for discontinuous or tabulated costs.
    pub fn continuity_modulus(&self, spaces: &[FactorSpace], h: f64) -> Option<f64> {
        let per_pair = |p: f64| -> f64 {
            let mut total = 0.0;
            for i in 0..spaces.len() {
                for j in i + 1..spaces.len() {
                    let reach = max_box_distance(&spaces[i], &spaces[j]);
                    // |d(u) - d(z)| <= 2h by the triangle inequality
                    total += if p >= 1.0 {
                        p * reach.powf(p - 1.0) * 2.0 * h
                    } else {
                        (2.0 * h).powf(p)
                    };
                }
            }
            total
        };
        match self {
            CostSpec::PowerDistance { p } => Some(per_pair(*p)),
            CostSpec::SquaredSumBarycenter => Some(per_pair(2.0)),
            CostSpec::EqualityIndicator { .. } if self.is_continuous() => Some(0.0),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CostSpec::PowerDistance { p } => json!({"kind": "power_distance", "p": p}),
            CostSpec::SquaredSumBarycenter => json!({"kind": "squared_sum_barycenter"}),
            CostSpec::EqualityIndicator {
                equal_value,
                unequal_value,
            } => json!({
                "kind": "equality_indicator",
                "equal_value": equal_value,
                "unequal_value": unequal_value
            }),
            CostSpec::Tensor(t) => {
                let mut v = json!({
                    "kind": "tensor",
                    "values": nest(&t.shape, &t.values),
                });
                if let Some(axes) = &t.axes {
                    v["axes"] = axes
                        .iter()
                        .map(|a| a.iter().map(|p| p.0.clone()).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                        .into();
                }
                v
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = |key: &str| -> Result<f64> {
            v.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Format(format!("cost: missing number {key:?}")))
        };
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format("cost: missing \"kind\"".into()))?;
        let spec = match kind {
            "power_distance" => CostSpec::PowerDistance { p: num("p")? },
            "squared_sum_barycenter" => CostSpec::SquaredSumBarycenter,
            "equality_indicator" => CostSpec::EqualityIndicator {
                equal_value: num("equal_value")?,
                unequal_value: num("unequal_value")?,
            },
            "tensor" => {
                let values = v
                    .get("values")
                    .ok_or_else(|| Error::Format("tensor: missing \"values\"".into()))?;
                let mut shape = Vec::new();
                let mut flat = Vec::new();
                flatten(values, 0, &mut shape, &mut flat)?;
                let mut t = TensorCost::new(shape, flat)?;
                if let Some(axes) = v.get("axes") {
                    let axes: Vec<Vec<Vec<f64>>> = serde_json::from_value(axes.clone())?;
                    t = t.with_axes(axes.into_iter().map(|a| a.into_iter().map(Point).collect()).collect())?;
                }
                CostSpec::Tensor(t)
            }
            other => return Err(Error::Format(format!("unknown cost kind {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn max_box_distance(a: &FactorSpace, b: &FactorSpace) -> f64 {
    a.bounds()
        .iter()
        .zip(b.bounds())
        .map(|(&(alo, ahi), &(blo, bhi))| {
            let d = (ahi - blo).abs().max((bhi - alo).abs());
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn nest(shape: &[usize], values: &[f64]) -> Value {
    if shape.len() == 1 {
        return Value::Array(
            values
                .iter()
                .map(|v| {
                    if v.is_infinite() {
                        Value::String("inf".into())
                    } else {
                        json!(v)
                    }
                })
                .collect(),
        );
    }
    let stride = values.len() / shape[0];
    Value::Array(values.chunks(stride).map(|c| nest(&shape[1..], c)).collect())
}

fn flatten(v: &Value, depth: usize, shape: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<()> {
    match v {
        Value::Array(items) => {
            if shape.len() == depth {
                shape.push(items.len());
            } else if shape[depth] != items.len() {
                return Err(Error::Format("tensor: ragged nested arrays".into()));
            }
            for it in items {
                flatten(it, depth + 1, shape, out)?;
            }
            Ok(())
        }
        Value::Number(n) if depth == shape.len() => {
            out.push(n.as_f64().ok_or_else(|| Error::Format("tensor: bad number".into()))?);
            Ok(())
        }
        Value::String(s) if s == "inf" && depth == shape.len() => {
            out.push(f64::INFINITY);
            Ok(())
        }
        _ => Err(Error::Format("tensor: unexpected entry".into())),
    }
}

/// Cost of one tuple, lifted into the weight arithmetic `W`.
pub fn eval_cost<W: Scalar>(c: &CostSpec, tuple: &[Point]) -> Result<CostValue<W>> {
    Ok(CostValue::from_raw(c.eval(tuple, W::POINT_TOL)?))
}

fn check_spaces<W: Scalar>(c: &CostSpec, plan: &DiscreteCoupling<W>) -> Result<()> {
    if let CostSpec::Tensor(t) = c {
        if t.shape().len() != plan.arity() {
            return Err(Error::DimensionMismatch {
                expected: t.shape().len(),
                got: plan.arity(),
            });
        }
    }
    Ok(())
}

/// `C[γ] = Σ w(z) c(z)`; `+∞` as soon as a charged tuple costs `+∞`.
pub fn integral_cost<W: Scalar>(c: &CostSpec, plan: &DiscreteCoupling<W>) -> Result<CostValue<W>> {
    check_spaces(c, plan)?;
    let mut total = CostValue::zero();
    for (t, w) in plan.atoms() {
        total = total + eval_cost::<W>(c, t)?.scale(w);
    }
    Ok(total)
}

/// `C∞[γ]`: the largest cost over the support.
pub fn sup_cost<W: Scalar>(c: &CostSpec, plan: &DiscreteCoupling<W>) -> Result<CostValue<W>> {
    check_spaces(c, plan)?;
    let mut best = f64::NEG_INFINITY;
    for (t, _) in plan.atoms() {
        best = best.max(c.eval(t, W::POINT_TOL)?);
    }
    Ok(CostValue::from_raw(best))
}

/// Dispatches on the objective.
pub fn objective_value<W: Scalar>(
    c: &CostSpec,
    plan: &DiscreteCoupling<W>,
    objective: Objective,
) -> Result<CostValue<W>> {
    match objective {
        Objective::Sum => integral_cost(c, plan),
        Objective::Max => sup_cost(c, plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn pt(x: f64) -> Point {
        Point::scalar(x)
    }

    fn unit2() -> Vec<FactorSpace> {
        vec![FactorSpace::interval(0.0, 1.0).unwrap(); 2]
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn power_distance_values() {
        let c = CostSpec::power_distance(2.0).unwrap();
        assert_eq!(c.eval(&[pt(0.0), pt(1.0)], 0.0).unwrap(), 1.0);
        let c1 = CostSpec::power_distance(1.0).unwrap();
        assert_eq!(c1.eval(&[pt(0.25), pt(1.0)], 0.0).unwrap(), 0.75);
        assert!(CostSpec::power_distance(0.0).is_err());
        assert!(matches!(
            c.eval(&[pt(0.0), Point::new(vec![0.0, 1.0])], 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equality_indicator_values() {
        let c = CostSpec::equality_indicator(1.0, 2.0).unwrap();
        assert_eq!(c.eval(&[pt(0.3), pt(0.3)], 0.0).unwrap(), 1.0);
        assert_eq!(c.eval(&[pt(0.3), pt(0.4)], 0.0).unwrap(), 2.0);
        assert_eq!(c.eval(&[pt(0.3), pt(0.3 + 1e-13)], 0.0).unwrap(), 2.0);
        assert_eq!(c.eval(&[pt(0.3), pt(0.3 + 1e-13)], 1e-12).unwrap(), 1.0);
        assert!(CostSpec::equality_indicator(2.0, 1.0).is_err());
    }

    #[test]
    fn barycenter_of_coincident_points_is_zero() {
        let c = CostSpec::SquaredSumBarycenter;
        assert_eq!(c.eval(&[pt(0.0), pt(0.0), pt(0.0)], 0.0).unwrap(), 0.0);
        assert_eq!(c.eval(&[pt(0.0), pt(1.0), pt(2.0)], 0.0).unwrap(), 1.0 + 4.0 + 1.0);
    }

    #[test]
    fn tensor_lookup() {
        let t = TensorCost::matrix(vec![vec![0.0, 3.0], vec![f64::INFINITY, 1.0]]).unwrap();
        let mut c = CostSpec::Tensor(t);
        assert_eq!(c.eval_indexed(&[], &[0, 1], 0.0).unwrap(), 3.0);
        assert!(c.eval_indexed(&[], &[2, 0], 0.0).is_err());
        assert!(c.eval(&[pt(0.0), pt(1.0)], 0.0).is_err());
        c.bind_axes(vec![vec![pt(0.0), pt(1.0)], vec![pt(0.0), pt(1.0)]])
            .unwrap();
        assert_eq!(c.eval(&[pt(1.0), pt(0.0)], 0.0).unwrap(), f64::INFINITY);
        let back = CostSpec::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn objectives_on_small_plans() {
        let c = CostSpec::power_distance(2.0).unwrap();
        let diag = DiscreteCoupling::<Rational>::uniform(unit2(), vec![vec![pt(0.0), pt(0.0)], vec![pt(1.0), pt(1.0)]])
            .unwrap();
        assert_eq!(integral_cost(&c, &diag).unwrap(), CostValue::zero());
        let anti = DiscreteCoupling::<Rational>::uniform(unit2(), vec![vec![pt(0.0), pt(1.0)], vec![pt(1.0), pt(0.0)]])
            .unwrap();
        assert_eq!(integral_cost(&c, &anti).unwrap(), CostValue::Finite(q(1, 1)));

        let ind = CostSpec::equality_indicator(1.0, 2.0).unwrap();
        assert_eq!(sup_cost(&ind, &diag).unwrap(), CostValue::Finite(q(1, 1)));
        assert_eq!(sup_cost(&ind, &anti).unwrap(), CostValue::Finite(q(2, 1)));
    }

    #[test]
    fn infinite_tensor_entry_propagates() {
        let mut c = CostSpec::Tensor(TensorCost::matrix(vec![vec![0.0, f64::INFINITY], vec![1.0, 0.0]]).unwrap());
        c.bind_axes(vec![vec![pt(0.0), pt(1.0)], vec![pt(0.0), pt(1.0)]])
            .unwrap();
        let plan = DiscreteCoupling::<Rational>::uniform(unit2(), vec![vec![pt(0.0), pt(1.0)], vec![pt(1.0), pt(0.0)]])
            .unwrap();
        assert_eq!(integral_cost(&c, &plan).unwrap(), CostValue::Infinite);
        assert_eq!(sup_cost(&c, &plan).unwrap(), CostValue::Infinite);
    }

    #[test]
    fn cost_value_order_and_json() {
        let a: CostValue<Rational> = CostValue::Finite(q(1, 2));
        assert!(a < CostValue::Infinite);
        assert!(a.tol_lt(&CostValue::Infinite, 0.0));
        assert!(!CostValue::<Rational>::Infinite.tol_lt(&CostValue::Infinite, 0.0));
        assert_eq!(CostValue::<Rational>::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(CostValue::<f64>::Infinite.to_json(), Value::String("inf".into()));
    }

    #[test]
    fn modulus_is_none_for_discontinuous_costs() {
        let s = unit2();
        assert!(CostSpec::equality_indicator(1.0, 2.0)
            .unwrap()
            .continuity_modulus(&s, 0.1)
            .is_none());
        assert_eq!(
            CostSpec::equality_indicator(1.0, 1.0)
                .unwrap()
                .continuity_modulus(&s, 0.1),
            Some(0.0)
        );
        let m = CostSpec::power_distance(2.0)
            .unwrap()
            .continuity_modulus(&s, 0.1)
            .unwrap();
        assert!((m - 0.4).abs() < 1e-12);
    }
}
