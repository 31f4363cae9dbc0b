use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::costs::{objective_value, CostSpec, CostValue, Objective};
use crate::error::{Error, Result};
use crate::measures::{sample_submeasure, DiscreteCoupling};
use crate::scalar::{Scalar, FLOAT_LP_TOL};
use crate::solvers::{solve, MotInstance, SolverGuard};

/// One sampled submeasure and its comparison against the exact optimum.
#[derive(Clone, Debug)]
pub struct AuditTrial<W: Scalar> {
    pub seed: u64,
    pub submeasure: DiscreteCoupling<W>,
    pub value: CostValue<W>,
    pub optimum: CostValue<W>,
    /// `value - optimum`; `Infinite` when only the value is infinite.
    pub gap: CostValue<W>,
}

impl<W: Scalar> AuditTrial<W> {
    pub fn passed(&self) -> bool {
        match &self.gap {
            CostValue::Finite(g) => !W::zero().tol_lt(g, FLOAT_LP_TOL),
            CostValue::Infinite => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditReport<W: Scalar> {
    pub objective: Objective,
    pub trials: Vec<AuditTrial<W>>,
}

impl<W: Scalar> AuditReport<W> {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(AuditTrial::passed)
    }

    pub fn max_gap(&self) -> Option<CostValue<W>> {
        self.trials.iter().map(|t| t.gap.clone()).reduce(CostValue::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objective": self.objective,
            "passed": self.passed(),
            "trials": self.trials.iter().map(|t| json!({
                "seed": t.seed,
                "size": t.submeasure.len(),
                "value": t.value.to_json(),
                "optimum": t.optimum.to_json(),
                "gap": t.gap.to_json(),
                "passed": t.passed(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Samples `trials` uniform submeasures of the plan with between 2 and
/// `l_max` atoms, solves each between its own marginals, and records the
/// gap to the optimum.
pub fn check_finite_optimality<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    trials: usize,
    l_max: usize,
    seed: u64,
    guard: &SolverGuard,
) -> Result<AuditReport<W>> {
    if l_max == 0 {
        return Err(Error::InvalidArgument("l_max must be positive".into()));
    }
    let hi = l_max.min(plan.len());
    let lo = hi.min(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(usize, u64)> = (0..trials).map(|_| (rng.random_range(lo..=hi), rng.random())).collect();
    let trials = draws
        .into_par_iter()
        .map(|(l, s)| audit_one(plan, cost, objective, l, s, guard))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport { objective, trials })
}

fn audit_one<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    l: usize,
    seed: u64,
    guard: &SolverGuard,
) -> Result<AuditTrial<W>> {
    let sub = sample_submeasure(plan, l, seed)?;
    let marginals = sub.marginals()?;
    let axes: Vec<_> = marginals.iter().map(|m| m.points().cloned().collect()).collect();
    let local = cost.restricted_to(&axes, W::POINT_TOL)?;
    let value = objective_value(&local, &sub, objective)?;
    let inst = MotInstance::new(marginals, local, objective)?;
    let optimum = solve(&inst, guard)?.value;
    let gap = value.gap(&optimum).map_or(CostValue::Infinite, CostValue::Finite);
    Ok(AuditTrial {
        seed,
        submeasure: sub,
        value,
        optimum,
        gap,
    })
}
