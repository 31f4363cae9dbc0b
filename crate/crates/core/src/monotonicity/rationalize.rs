use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::{DiscreteCoupling, PointKey};
use crate::scalar::{limit_denominator, rational_to_f64, Rational, Scalar, WeightMode};

/// Tolerance for accepting float inputs as having equal marginals.
const MARGINAL_TOL: f64 = 1e-12;

/// The marginal-equality system `𝒜 v = e` in the variables
/// `v = (a_1, …, a_n, b_1, …, b_m)`: one row per marginal point with
/// entries in `{1, 0, -1}`, plus `Σ a_i = 1`.
pub fn marginal_equality_system<W: Scalar>(
    a: &DiscreteCoupling<W>,
    b: &DiscreteCoupling<W>,
) -> Result<(Vec<Vec<i8>>, Vec<i8>)> {
    if a.arity() != b.arity() {
        return Err(Error::DimensionMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    let (n, m) = (a.len(), b.len());
    let mut rows = Vec::new();
    for k in 0..a.arity() {
        let mut by_point: BTreeMap<PointKey, Vec<i8>> = BTreeMap::new();
        for (i, (t, _)) in a.atoms().iter().enumerate() {
            by_point.entry(t[k].key()).or_insert_with(|| vec![0; n + m])[i] += 1;
        }
        for (j, (t, _)) in b.atoms().iter().enumerate() {
            by_point.entry(t[k].key()).or_insert_with(|| vec![0; n + m])[n + j] -= 1;
        }
        rows.extend(by_point.into_values());
    }
    let mut rhs = vec![0; rows.len()];
    let mut norm = vec![0; n + m];
    norm[..n].fill(1);
    rows.push(norm);
    rhs.push(1);
    Ok((rows, rhs))
}

/// Reduced row echelon form of `[M | e]`, dropping zero rows.
/// Returns the reduced rows and their pivot columns.
fn rref(rows: &[Vec<i8>], rhs: &[i8]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut t: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, e)| {
            r.iter()
                .chain(std::iter::once(e))
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..t.len()).find(|&i| !t[i][c].is_zero()) else {
            continue;
        };
        t.swap(r, p);
        let inv = t[r][c].recip();
        for x in t[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == t.len() {
            break;
        }
    }
    t.truncate(r);
    (t, pivots)
}

/// Rational weights on the supports of `a` and `b` with exactly equal
/// marginals, each within `eps` of the input weight and all positive.
///
/// The free coordinates of the affine solution set are rounded by best
/// rational approximation; the pivot coordinates follow exactly.
pub fn rationalize_pair<W: Scalar>(
    a: &DiscreteCoupling<W>,
    b: &DiscreteCoupling<W>,
    eps: &Rational,
) -> Result<(DiscreteCoupling<Rational>, DiscreteCoupling<Rational>)> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let (rows, rhs) = marginal_equality_system(a, b)?;
    let x: Vec<Rational> = a
        .atoms()
        .iter()
        .chain(b.atoms())
        .map(|(_, w)| w.to_rational())
        .collect();

    let residual = rows
        .iter()
        .zip(&rhs)
        .map(|(r, e)| {
            let lhs = r
                .iter()
                .zip(&x)
                .filter(|(c, _)| **c != 0)
                .fold(Rational::zero(), |acc, (c, v)| {
                    acc + v * Rational::from_integer(BigInt::from(*c))
                });
            (lhs - Rational::from_integer(BigInt::from(*e))).abs()
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let tol = match W::MODE {
        WeightMode::Rational => Rational::zero(),
        WeightMode::Float => Rational::from_f64(MARGINAL_TOL),
    };
    if residual > tol {
        return Err(Error::MarginalMismatch(format!(
            "marginal equations violated by {}",
            rational_to_f64(&residual)
        )));
    }
    let rebuild = |q: Vec<Rational>| -> Result<(DiscreteCoupling<Rational>, DiscreteCoupling<Rational>)> {
        let (qa, qb) = q.split_at(a.len());
        Ok((a.reweighted(qa.to_vec())?, b.reweighted(qb.to_vec())?))
    };
    if residual.is_zero() {
        return rebuild(x);
    }

    let (red, pivots) = rref(&rows, &rhs);
    let width = x.len();
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    // pivot = rhs - Σ_f coef_f * free_f
    let solve_pivots = |v: &mut Vec<Rational>| {
        for (row, &p) in red.iter().zip(&pivots) {
            let mut val = row[width].clone();
            for &f in &free {
                if !row[f].is_zero() {
                    val -= &row[f] * &v[f];
                }
            }
            v[p] = val;
        }
    };
    let mut projected = x.clone();
    solve_pivots(&mut projected);
    let drift = x
        .iter()
        .zip(&projected)
        .map(|(u, v)| (u - v).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let lipschitz = red
        .iter()
        .map(|row| free.iter().fold(Rational::zero(), |acc, &f| acc + row[f].abs()))
        .max()
        .unwrap_or_else(Rational::zero);

    let margin = x.iter().min().cloned().unwrap_or_else(Rational::zero);
    let budget = margin.clone().min(eps.clone()) - drift;
    let one = Rational::from_integer(BigInt::from(1));
    let step = budget / ((lipschitz + &one) * Rational::from_integer(BigInt::from(2)));
    if !step.is_positive() {
        return Err(Error::Positivity {
            margin: rational_to_f64(&margin),
            eps: rational_to_f64(eps),
        });
    }
    let max_den = (one / step).ceil().to_integer() + 1;

    let mut q = x.clone();
    for &f in &free {
        q[f] = limit_denominator(&x[f], &max_den);
    }
    solve_pivots(&mut q);
    let ok = q
        .iter()
        .zip(&x)
        .all(|(qi, xi)| qi.is_positive() && (qi - xi).abs() < *eps);
    if !ok {
        return Err(Error::Positivity {
            margin: rational_to_f64(&margin),
            eps: rational_to_f64(eps),
        });
    }
    rebuild(q)
}
