use itertools::Itertools;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::costs::{CostSpec, CostValue, Objective};
use crate::error::{Error, Result};
use crate::measures::Point;
use crate::scalar::{Scalar, WeightMode, FLOAT_LP_TOL};

/// Limits for the exhaustive search. The checker refuses rather than
/// sampling when a limit is exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_k: usize,
    pub max_arity: usize,
    pub max_support: usize,
    /// Cap on `Σ_k C(n+k-1, k) (k!)^(N-1)` candidate configurations.
    pub max_evals: u128,
}

impl Default for SearchGuard {
    fn default() -> Self {
        SearchGuard {
            max_k: 5,
            max_arity: 3,
            max_support: 60,
            max_evals: 200_000_000,
        }
    }
}

/// A violating reassignment: `k` support tuples and `N - 1` permutations
/// whose reassigned tuples aggregate to strictly less cost.
///
/// Permutations are 0-based here and 1-based in JSON. Reassigned tuple `j`
/// is `(x¹ of tuple j, x² of tuple σ²(j), …, xᴺ of tuple σᴺ(j))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<W: Scalar> {
    /// Positions of the tuples in the audited support; empty when the
    /// certificate was read back from JSON.
    pub indices: Vec<usize>,
    pub tuples: Vec<Vec<Point>>,
    pub permutations: Vec<Vec<usize>>,
    pub before: CostValue<W>,
    pub after: CostValue<W>,
    pub aggregate: Objective,
}

impl<W: Scalar> Certificate<W> {
    pub fn k(&self) -> usize {
        self.tuples.len()
    }

    pub fn reassigned(&self) -> Vec<Vec<Point>> {
        (0..self.k())
            .map(|j| {
                let mut t = vec![self.tuples[j][0].clone()];
                for (f, sigma) in self.permutations.iter().enumerate() {
                    t.push(self.tuples[sigma[j]][f + 1].clone());
                }
                t
            })
            .collect()
    }

    /// Recomputes `(before, after)` from the tuples and permutations.
    pub fn recompute(&self, cost: &CostSpec) -> Result<(CostValue<W>, CostValue<W>)> {
        let agg = |ts: &[Vec<Point>]| -> Result<CostValue<W>> {
            let vals = ts
                .iter()
                .map(|t| Ok(CostValue::from_raw(cost.eval(t, W::POINT_TOL)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(aggregate(self.aggregate, vals))
        };
        Ok((agg(&self.tuples)?, agg(&self.reassigned())?))
    }

    /// True when the stored aggregates are reproduced and `after < before`.
    pub fn verify(&self, cost: &CostSpec) -> Result<bool> {
        let k = self.k();
        let arity = self.tuples.first().map_or(0, Vec::len);
        let shape_ok = k >= 1
            && self.tuples.iter().all(|t| t.len() == arity)
            && self.permutations.len() + 1 == arity
            && self.permutations.iter().all(|s| is_permutation(s, k));
        if !shape_ok {
            return Ok(false);
        }
        let (before, after) = self.recompute(cost)?;
        Ok(before == self.before && after == self.after && violates(&after, &before))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "indices": self.indices,
            "tuples": self.tuples.iter().map(|t| t.iter().map(|p| p.0.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "permutations": self.permutations.iter().map(|s| s.iter().map(|j| j + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "aggregate": self.aggregate,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Format(format!("certificate: missing {name:?}")))
        };
        let tuples: Vec<Vec<Vec<f64>>> = serde_json::from_value(field("tuples")?.clone())?;
        let perms: Vec<Vec<usize>> = serde_json::from_value(field("permutations")?.clone())?;
        let permutations = perms
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .map(|j| {
                        j.checked_sub(1)
                            .ok_or_else(|| Error::Format("permutations are 1-based".into()))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let indices = match v.get("indices") {
            Some(i) => serde_json::from_value(i.clone())?,
            None => Vec::new(),
        };
        let cert = Certificate {
            indices,
            tuples: tuples.into_iter().map(|t| t.into_iter().map(Point).collect()).collect(),
            permutations,
            before: CostValue::from_json(field("before")?)?,
            after: CostValue::from_json(field("after")?)?,
            aggregate: serde_json::from_value(field("aggregate")?.clone())?,
        };
        if let Some(k) = v.get("k").and_then(Value::as_u64) {
            if k as usize != cert.k() {
                return Err(Error::Format(format!("certificate: k = {k} but {} tuples", cert.k())));
            }
        }
        Ok(cert)
    }
}

fn is_permutation(s: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    s.len() == k && s.iter().all(|&j| j < k && !std::mem::replace(&mut seen[j], true))
}

fn aggregate<W: Scalar>(kind: Objective, vals: Vec<CostValue<W>>) -> CostValue<W> {
    match kind {
        Objective::Sum => vals.into_iter().fold(CostValue::zero(), |a, b| a + b),
        Objective::Max => vals.into_iter().reduce(CostValue::max).unwrap_or_else(CostValue::zero),
    }
}

fn violates<W: Scalar>(after: &CostValue<W>, before: &CostValue<W>) -> bool {
    after.tol_lt(before, FLOAT_LP_TOL)
}

/// Is the support c-cyclically monotone up to `k_max`? Returns the
/// lexicographically first violation (by `k`, then index sequence, then
/// permutation sequence), or `None`.
pub fn check_cm<W: Scalar>(
    support: &[Vec<Point>],
    cost: &CostSpec,
    k_max: usize,
    guard: &SearchGuard,
) -> Result<Option<Certificate<W>>> {
    find_violation(support, cost, Objective::Sum, k_max, guard)
}

/// As [`check_cm`] with the maximum in place of the sum.
pub fn check_icm<W: Scalar>(
    support: &[Vec<Point>],
    cost: &CostSpec,
    k_max: usize,
    guard: &SearchGuard,
) -> Result<Option<Certificate<W>>> {
    find_violation(support, cost, Objective::Max, k_max, guard)
}

/// Number of configurations the search visits, saturating.
pub fn search_size(n: usize, arity: usize, k_max: usize) -> u128 {
    let mut total: u128 = 0;
    for k in 2..=k_max {
        // C(n + k - 1, k)
        let mut multisets: u128 = 1;
        for i in 0..k as u128 {
            multisets = multisets.saturating_mul(n as u128 + i) / (i + 1);
        }
        let fact: u128 = (1..=k as u128).product();
        let perms = (0..arity.saturating_sub(1)).fold(1u128, |a, _| a.saturating_mul(fact));
        total = total.saturating_add(multisets.saturating_mul(perms));
    }
    total
}

/// Exhaustive search for a reassignment of `k <= k_max` support tuples that
/// strictly lowers the aggregate cost.
pub fn find_violation<W: Scalar>(
    support: &[Vec<Point>],
    cost: &CostSpec,
    objective: Objective,
    k_max: usize,
    guard: &SearchGuard,
) -> Result<Option<Certificate<W>>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max must be at least 2, got {k_max}")));
    }
    let n = support.len();
    let arity = support.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    if arity < 2 || support.iter().any(|t| t.len() != arity) {
        return Err(Error::InvalidArgument(
            "support tuples need a common arity N >= 2".into(),
        ));
    }
    let limit = |what, requested: usize, limit: usize| {
        if requested > limit {
            Err(Error::Guard {
                what,
                requested: requested as u128,
                limit: limit as u128,
            })
        } else {
            Ok(())
        }
    };
    limit("cycle length k_max", k_max, guard.max_k)?;
    limit("marginal count N", arity, guard.max_arity)?;
    limit("support size", n, guard.max_support)?;
    let evals = search_size(n, arity, k_max);
    if evals > guard.max_evals {
        return Err(Error::Guard {
            what: "search configurations",
            requested: evals,
            limit: guard.max_evals,
        });
    }

    let table = CostTable::new(support, cost, W::POINT_TOL)?;
    for k in 2..=k_max {
        let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
        let tuples: Vec<Vec<usize>> = (0..arity - 1)
            .map(|_| 0..perms.len())
            .multi_cartesian_product()
            .filter(|t| t.iter().any(|&p| p != 0))
            .collect();
        let found = (0..n).into_par_iter().find_map_first(|first| {
            let mut idx = vec![first; k];
            loop {
                if let Some(hit) = table.scan::<W>(objective, &idx, &perms, &tuples) {
                    return Some((idx, hit));
                }
                if !next_multiset(&mut idx, n) {
                    return None;
                }
            }
        });
        if let Some((idx, hit)) = found {
            let permutations: Vec<Vec<usize>> = hit.iter().map(|&p| perms[p].clone()).collect();
            let mut cert = Certificate {
                tuples: idx.iter().map(|&i| support[i].clone()).collect(),
                indices: idx,
                permutations,
                before: CostValue::zero(),
                after: CostValue::zero(),
                aggregate: objective,
            };
            let (before, after) = cert.recompute(cost)?;
            cert.before = before;
            cert.after = after;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Next nondecreasing sequence with the same first entry, in lex order.
fn next_multiset(idx: &mut [usize], n: usize) -> bool {
    for pos in (1..idx.len()).rev() {
        if idx[pos] + 1 < n {
            let v = idx[pos] + 1;
            idx[pos..].fill(v);
            return true;
        }
    }
    false
}

/// Raw costs of every mixed tuple `(x¹_{a1}, …, xᴺ_{aN})` over the support.
struct CostTable {
    n: usize,
    arity: usize,
    values: Vec<f64>,
}

impl CostTable {
    fn new(support: &[Vec<Point>], cost: &CostSpec, tol: f64) -> Result<Self> {
        let n = support.len();
        let arity = support[0].len();
        let values = (0..arity)
            .map(|_| 0..n)
            .multi_cartesian_product()
            .map(|a| {
                let t: Vec<Point> = a.iter().enumerate().map(|(f, &i)| support[i][f].clone()).collect();
                cost.eval(&t, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CostTable { n, arity, values })
    }

    fn at(&self, first: usize, rest: impl Iterator<Item = usize>) -> f64 {
        let mut pos = first;
        for i in rest {
            pos = pos * self.n + i;
        }
        self.values[pos]
    }

    fn diag(&self, i: usize) -> f64 {
        self.at(i, std::iter::repeat_n(i, self.arity - 1))
    }

    /// First permutation tuple (as indices into `perms`) that violates the
    /// inequality on the multiset `idx`.
    fn scan<W: Scalar>(
        &self,
        objective: Objective,
        idx: &[usize],
        perms: &[Vec<usize>],
        tuples: &[Vec<usize>],
    ) -> Option<Vec<usize>> {
        let k = idx.len();
        let after_at = |t: &[usize], j: usize| self.at(idx[j], t.iter().map(|&p| idx[perms[p][j]]));
        match objective {
            Objective::Sum => {
                let before: f64 = idx.iter().map(|&i| self.diag(i)).sum();
                // loose filter; the exact comparison below decides
                let slack = 1e-9 * (1.0 + before.abs());
                tuples
                    .iter()
                    .find(|t| {
                        let after: f64 = (0..k).map(|j| after_at(t, j)).sum();
                        after < before + slack && confirm::<W>(self, idx, perms, t)
                    })
                    .cloned()
            }
            Objective::Max => {
                // costs lift exactly, so comparing raw values is exact
                let before = idx.iter().map(|&i| self.diag(i)).fold(f64::NEG_INFINITY, f64::max);
                let tol = match W::MODE {
                    WeightMode::Rational => 0.0,
                    WeightMode::Float => FLOAT_LP_TOL,
                };
                tuples
                    .iter()
                    .find(|t| (0..k).all(|j| after_at(t, j) < before - tol))
                    .cloned()
            }
        }
    }
}

fn confirm<W: Scalar>(table: &CostTable, idx: &[usize], perms: &[Vec<usize>], t: &[usize]) -> bool {
    let k = idx.len();
    let before = idx
        .iter()
        .fold(CostValue::<W>::zero(), |a, &i| a + CostValue::from_raw(table.diag(i)));
    let after = (0..k).fold(CostValue::<W>::zero(), |a, j| {
        a + CostValue::from_raw(table.at(idx[j], t.iter().map(|&p| idx[perms[p][j]])))
    });
    violates(&after, &before)
}
