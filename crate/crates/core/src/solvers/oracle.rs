use itertools::Itertools;

use crate::costs::{CostValue, Objective};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{MotInstance, Solution, SolveStatus};

/// Largest `m` for which the `m!` enumeration is allowed.
pub const ORACLE_MAX_ATOMS: usize = 7;

/// Exhaustive search over permutation plans of a uniform two-marginal
/// instance. Used only to validate the LP and bisection solvers.
///
/// Ties keep the lexicographically first permutation.
pub fn brute_force_oracle<W: Scalar>(inst: &MotInstance<W>) -> Result<Solution<W>> {
    let [mu, nu] = inst.marginals() else {
        return Err(Error::Precondition("oracle needs exactly two marginals".into()));
    };
    let m = mu.len();
    if nu.len() != m || m > ORACLE_MAX_ATOMS {
        return Err(Error::Precondition(format!(
            "oracle needs equal atom counts <= {ORACLE_MAX_ATOMS}, got {} and {}",
            m,
            nu.len()
        )));
    }
    let share = W::from_ratio(1, m as i64);
    let uniform = |w: &W| w.tol_eq(&share, 1e-12);
    if !mu.atoms().iter().all(|(_, w)| uniform(w)) || !nu.atoms().iter().all(|(_, w)| uniform(w)) {
        return Err(Error::Precondition("oracle needs uniform weights".into()));
    }

    let mut table: Vec<Vec<CostValue<W>>> = Vec::with_capacity(m);
    for (i, (x, _)) in mu.atoms().iter().enumerate() {
        let mut row = Vec::with_capacity(m);
        for (j, (y, _)) in nu.atoms().iter().enumerate() {
            let c = inst
                .cost()
                .eval_indexed(&[x.clone(), y.clone()], &[i, j], W::POINT_TOL)?;
            row.push(CostValue::from_raw(c));
        }
        table.push(row);
    }

    let mut best: Option<(Vec<usize>, CostValue<W>)> = None;
    for perm in (0..m).permutations(m) {
        let value = match inst.objective() {
            Objective::Sum => perm
                .iter()
                .enumerate()
                .fold(CostValue::zero(), |acc, (i, &j)| acc + table[i][j].scale(&share)),
            Objective::Max => perm
                .iter()
                .enumerate()
                .map(|(i, &j)| table[i][j].clone())
                .reduce(CostValue::max)
                .expect("m >= 1"),
        };
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((perm, value));
        }
    }
    let (perm, value) = best.expect("at least one permutation");
    let plan = inst.plan_from_cells(
        perm.iter()
            .enumerate()
            .map(|(i, &j)| (vec![i, j], share.clone()))
            .collect(),
    )?;
    Ok(Solution {
        plan,
        value,
        status: SolveStatus::Optimal,
    })
}
