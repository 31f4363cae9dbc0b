//! Exact discrete multi-marginal transport solvers.
//!
//! The transport polytope is materialised with one variable per product
//! cell. The integral objective is solved by the simplex method; the sup
//! objective by bisection over the distinct cost values, each level being a
//! feasibility problem (max-flow for two marginals, phase-one LP otherwise).

mod flow;
mod oracle;
mod simplex;

use serde_json::Value;

use crate::costs::{integral_cost, sup_cost, CostSpec, CostValue, Objective};
use crate::error::{Error, Result};
use crate::measures::{DiscreteCoupling, DiscreteMeasure, Point};
use crate::scalar::{Scalar, FLOAT_LP_TOL};

pub use oracle::brute_force_oracle;
use simplex::{LpOutcome, StandardForm};

/// Size limit for the materialised LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverGuard {
    /// Maximum number of product cells `∏ m_k`.
    pub max_cells: usize,
}

impl Default for SolverGuard {
    fn default() -> Self {
        SolverGuard { max_cells: 10_000 }
    }
}

/// A discrete MOT problem.
#[derive(Clone, Debug, PartialEq)]
pub struct MotInstance<W: Scalar> {
    marginals: Vec<DiscreteMeasure<W>>,
    cost: CostSpec,
    objective: Objective,
}

impl<W: Scalar> MotInstance<W> {
    /// An axis-less tensor cost is bound to the marginals' atoms, in order.
    pub fn new(marginals: Vec<DiscreteMeasure<W>>, mut cost: CostSpec, objective: Objective) -> Result<Self> {
        if marginals.len() < 2 {
            return Err(Error::InvalidArgument("need at least two marginals".into()));
        }
        cost.validate()?;
        if let CostSpec::Tensor(t) = &cost {
            let shape: Vec<usize> = marginals.iter().map(DiscreteMeasure::len).collect();
            if t.shape() != shape.as_slice() {
                return Err(Error::InvalidCost(format!(
                    "tensor shape {:?} does not match marginal sizes {shape:?}",
                    t.shape()
                )));
            }
        }
        cost.bind_axes(marginals.iter().map(|m| m.points().cloned().collect()).collect())?;
        let first = marginals[0].total_mass();
        for m in &marginals[1..] {
            if !m.total_mass().tol_eq(&first, FLOAT_LP_TOL) {
                return Err(Error::MarginalMismatch("marginal masses differ".into()));
            }
        }
        Ok(MotInstance {
            marginals,
            cost,
            objective,
        })
    }

    pub fn marginals(&self) -> &[DiscreteMeasure<W>] {
        &self.marginals
    }

    pub fn cost(&self) -> &CostSpec {
        &self.cost
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn with_objective(&self, objective: Objective) -> Self {
        MotInstance {
            objective,
            ..self.clone()
        }
    }

    fn shape(&self) -> Vec<usize> {
        self.marginals.iter().map(DiscreteMeasure::len).collect()
    }

    fn check_guard(&self, guard: &SolverGuard) -> Result<usize> {
        let cells = self
            .shape()
            .iter()
            .try_fold(1usize, |acc, m| acc.checked_mul(*m))
            .unwrap_or(usize::MAX);
        if cells > guard.max_cells {
            return Err(Error::Guard {
                what: "product cells",
                requested: cells as u128,
                limit: guard.max_cells as u128,
            });
        }
        Ok(cells)
    }

    /// Per-cell multi-index (row-major) and raw cost.
    fn cells(&self, guard: &SolverGuard) -> Result<Vec<(Vec<usize>, f64)>> {
        let count = self.check_guard(guard)?;
        let shape = self.shape();
        let mut out = Vec::with_capacity(count);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..count {
            let tuple = self.tuple(&idx);
            let c = self.cost.eval_indexed(&tuple, &idx, W::POINT_TOL)?;
            out.push((idx.clone(), c));
            for k in (0..shape.len()).rev() {
                idx[k] += 1;
                if idx[k] < shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(out)
    }

    fn tuple(&self, idx: &[usize]) -> Vec<Point> {
        idx.iter()
            .zip(&self.marginals)
            .map(|(i, m)| m.atoms()[*i].0.clone())
            .collect()
    }

    fn plan_from_cells(&self, cells: Vec<(Vec<usize>, W)>) -> Result<DiscreteCoupling<W>> {
        let spaces = self.marginals.iter().map(|m| m.space().clone()).collect();
        DiscreteCoupling::from_unmerged(
            spaces,
            cells.into_iter().map(|(idx, w)| (self.tuple(&idx), w)).collect(),
        )
    }

    /// Marginal constraints restricted to `cells` (indices into `all`).
    fn standard_form(&self, all: &[(Vec<usize>, f64)], cells: &[usize]) -> StandardForm<W> {
        let shape = self.shape();
        let offsets: Vec<usize> = shape
            .iter()
            .scan(0, |acc, m| {
                let o = *acc;
                *acc += m;
                Some(o)
            })
            .collect();
        let mut rows = vec![Vec::new(); shape.iter().sum()];
        for (var, &c) in cells.iter().enumerate() {
            for (k, i) in all[c].0.iter().enumerate() {
                rows[offsets[k] + i].push((var, W::one()));
            }
        }
        let rhs = self
            .marginals
            .iter()
            .flat_map(|m| m.atoms().iter().map(|(_, w)| w.clone()))
            .collect();
        StandardForm {
            n_vars: cells.len(),
            rows,
            rhs,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "marginals": self.marginals.iter().map(DiscreteMeasure::to_json).collect::<Vec<_>>(),
            "cost": self.cost.to_json(),
            "objective": self.objective,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let marginals = v
            .get("marginals")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("instance: missing \"marginals\"".into()))?
            .iter()
            .map(DiscreteMeasure::from_json)
            .collect::<Result<Vec<_>>>()?;
        let cost = CostSpec::from_json(
            v.get("cost")
                .ok_or_else(|| Error::Format("instance: missing \"cost\"".into()))?,
        )?;
        let objective = match v.get("objective") {
            Some(o) => serde_json::from_value(o.clone())?,
            None => Objective::Sum,
        };
        MotInstance::new(marginals, cost, objective)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    InfeasibleGuard,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<W: Scalar> {
    pub plan: DiscreteCoupling<W>,
    pub value: CostValue<W>,
    pub status: SolveStatus,
}

impl<W: Scalar> Solution<W> {
    /// Does the plan couple the instance marginals?
    pub fn is_feasible_for(&self, inst: &MotInstance<W>) -> bool {
        self.plan.has_marginals(inst.marginals(), FLOAT_LP_TOL)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.plan.to_json();
        v["value"] = self.value.to_json();
        v["status"] = serde_json::to_value(self.status).expect("status serialises");
        v
    }
}

/// Minimises `∫ c dγ` over the couplings of the instance marginals.
pub fn solve_integral_mot<W: Scalar>(inst: &MotInstance<W>, guard: &SolverGuard) -> Result<Solution<W>> {
    let all = inst.cells(guard)?;
    let finite: Vec<usize> = (0..all.len()).filter(|&c| all[c].1.is_finite()).collect();
    let lp = inst.standard_form(&all, &finite);
    let costs: Vec<W> = finite.iter().map(|&c| W::from_f64(all[c].1)).collect();
    let plan = match simplex::solve(&lp, Some(&costs), FLOAT_LP_TOL) {
        LpOutcome::Optimal { x, .. } => inst.plan_from_cells(
            finite
                .iter()
                .zip(x)
                .filter(|(_, w)| w.tol_is_positive(0.0))
                .map(|(&c, w)| (all[c].0.clone(), w))
                .collect(),
        )?,
        // every coupling charges an infinite cell
        LpOutcome::Infeasible => DiscreteCoupling::product(inst.marginals())?,
        LpOutcome::Unbounded => return Err(Error::Precondition("transport LP reported unbounded".into())),
    };
    let value = integral_cost(inst.cost(), &plan)?;
    Ok(Solution {
        plan,
        value,
        status: SolveStatus::Optimal,
    })
}

/// How [`feasibility_at_level_with`] decides the threshold subproblem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityMethod {
    /// Max-flow for two marginals, LP otherwise.
    Auto,
    Flow,
    Lp,
}

/// Is there a coupling supported on `{c <= level}`? Returns a witness.
pub fn feasibility_at_level<W: Scalar>(
    inst: &MotInstance<W>,
    level: &CostValue<W>,
    guard: &SolverGuard,
) -> Result<Option<DiscreteCoupling<W>>> {
    feasibility_at_level_with(inst, level, FeasibilityMethod::Auto, guard)
}

pub fn feasibility_at_level_with<W: Scalar>(
    inst: &MotInstance<W>,
    level: &CostValue<W>,
    method: FeasibilityMethod,
    guard: &SolverGuard,
) -> Result<Option<DiscreteCoupling<W>>> {
    let all = inst.cells(guard)?;
    feasible_cells(inst, &all, |c| CostValue::<W>::from_raw(c) <= *level, method)
}

fn feasible_cells<W: Scalar>(
    inst: &MotInstance<W>,
    all: &[(Vec<usize>, f64)],
    allowed: impl Fn(f64) -> bool,
    method: FeasibilityMethod,
) -> Result<Option<DiscreteCoupling<W>>> {
    let cells: Vec<usize> = (0..all.len()).filter(|&c| allowed(all[c].1)).collect();
    if cells.is_empty() {
        return Ok(None);
    }
    let use_flow = match method {
        FeasibilityMethod::Auto => inst.marginals.len() == 2,
        FeasibilityMethod::Flow => {
            if inst.marginals.len() != 2 {
                return Err(Error::InvalidArgument(
                    "max-flow feasibility needs exactly two marginals".into(),
                ));
            }
            true
        }
        FeasibilityMethod::Lp => false,
    };
    let picked: Vec<(Vec<usize>, W)> = if use_flow {
        let weights = |k: usize| -> Vec<W> { inst.marginals[k].atoms().iter().map(|(_, w)| w.clone()).collect() };
        let pairs: Vec<(usize, usize)> = cells.iter().map(|&c| (all[c].0[0], all[c].0[1])).collect();
        match flow::couple_on_cells(&weights(0), &weights(1), &pairs, FLOAT_LP_TOL) {
            Some(plan) => plan.into_iter().map(|((i, j), w)| (vec![i, j], w)).collect(),
            None => return Ok(None),
        }
    } else {
        let lp = inst.standard_form(all, &cells);
        match simplex::solve(&lp, None, FLOAT_LP_TOL) {
            LpOutcome::Optimal { x, .. } => cells
                .iter()
                .zip(x)
                .filter(|(_, w)| w.tol_is_positive(0.0))
                .map(|(&c, w)| (all[c].0.clone(), w))
                .collect(),
            _ => return Ok(None),
        }
    };
    Ok(Some(inst.plan_from_cells(picked)?))
}

/// Minimises `C∞[γ]` by bisection over the sorted distinct cost values.
pub fn solve_sup_mot<W: Scalar>(inst: &MotInstance<W>, guard: &SolverGuard) -> Result<Solution<W>> {
    let all = inst.cells(guard)?;
    let mut levels: Vec<f64> = all.iter().map(|(_, c)| *c).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let probe = |t: f64| feasible_cells(inst, &all, |c| c <= t, FeasibilityMethod::Auto);

    // the top level admits every cell, so the product coupling is feasible
    let mut hi = levels.len() - 1;
    let mut best =
        probe(levels[hi])?.ok_or_else(|| Error::Precondition("no coupling exists on the full product".into()))?;
    let mut lo = 0usize;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match probe(levels[mid])? {
            Some(plan) => {
                best = plan;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if let Some(refined) = refine_top_down(inst, &all, &levels[..=hi])? {
        best = refined;
    }
    let value = sup_cost(inst.cost(), &best)?;
    debug_assert_eq!(value, CostValue::from_raw(levels[hi]));
    Ok(Solution {
        plan: best,
        value,
        status: SolveStatus::Optimal,
    })
}

/// Among couplings on `{c <= levels.last()}`, minimises the mass on the
/// highest level, then on the next one, and so on. A plan that is optimal
/// in this order admits no reassignment lowering the maximum over the
/// reassigned tuples, which a bare feasibility witness need not satisfy.
fn refine_top_down<W: Scalar>(
    inst: &MotInstance<W>,
    all: &[(Vec<usize>, f64)],
    levels: &[f64],
) -> Result<Option<DiscreteCoupling<W>>> {
    if levels.len() < 2 {
        return Ok(None);
    }
    let top = levels[levels.len() - 1];
    let mut cells: Vec<usize> = (0..all.len()).filter(|&c| all[c].1 <= top).collect();
    let mut pinned: Vec<(f64, W)> = Vec::new();
    let mut x: Option<Vec<W>> = None;
    for &level in levels[1..].iter().rev() {
        let here: Vec<bool> = cells.iter().map(|&c| all[c].1 == level).collect();
        let already_zero = x
            .as_ref()
            .is_some_and(|x| x.iter().zip(&here).all(|(w, &h)| !h || w.tol_is_zero(FLOAT_LP_TOL)));
        if !already_zero {
            let costs: Vec<W> = here.iter().map(|&h| if h { W::one() } else { W::zero() }).collect();
            let LpOutcome::Optimal { x: sol, value } =
                simplex::solve(&pinned_form(inst, all, &cells, &pinned), Some(&costs), FLOAT_LP_TOL)
            else {
                return Ok(None);
            };
            x = Some(sol);
            if !value.tol_is_zero(FLOAT_LP_TOL) {
                pinned.push((level, value));
                continue;
            }
        }
        x = x.map(|x| x.into_iter().zip(&here).filter(|(_, &h)| !h).map(|(w, _)| w).collect());
        cells = cells
            .into_iter()
            .zip(&here)
            .filter(|(_, &h)| !h)
            .map(|(c, _)| c)
            .collect();
    }
    let Some(x) = x else {
        return Ok(None);
    };
    Ok(Some(
        inst.plan_from_cells(
            cells
                .iter()
                .zip(x)
                .filter(|(_, w)| w.tol_is_positive(0.0))
                .map(|(&c, w)| (all[c].0.clone(), w))
                .collect(),
        )?,
    ))
}

/// Marginal constraints on `cells` plus one row fixing the mass of each
/// pinned level.
fn pinned_form<W: Scalar>(
    inst: &MotInstance<W>,
    all: &[(Vec<usize>, f64)],
    cells: &[usize],
    pinned: &[(f64, W)],
) -> StandardForm<W> {
    let mut lp = inst.standard_form(all, cells);
    for (level, mass) in pinned {
        lp.rows.push(
            (0..cells.len())
                .filter(|&v| all[cells[v]].1 == *level)
                .map(|v| (v, W::one()))
                .collect(),
        );
        lp.rhs.push(mass.clone());
    }
    lp
}

/// Dispatches on the instance objective.
pub fn solve<W: Scalar>(inst: &MotInstance<W>, guard: &SolverGuard) -> Result<Solution<W>> {
    match inst.objective() {
        Objective::Sum => solve_integral_mot(inst, guard),
        Objective::Max => solve_sup_mot(inst, guard),
    }
}

/// Sorted distinct raw cost values over the product of the marginal supports.
pub fn cost_levels<W: Scalar>(inst: &MotInstance<W>, guard: &SolverGuard) -> Result<Vec<f64>> {
    let mut levels: Vec<f64> = inst.cells(guard)?.into_iter().map(|(_, c)| c).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    Ok(levels)
}
