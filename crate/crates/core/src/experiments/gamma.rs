use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::costs::{objective_value, CostSpec, CostValue, Objective};
use crate::discretization::{discretize_plan, plan_partition, DeltaSchedule, RepRule, REPORT_DICTIONARY};
use crate::error::{Error, Result};
use crate::measures::{bl_discrepancy, DiscreteCoupling, DiscreteMeasure};
use crate::scalar::Scalar;
use crate::solvers::{solve, MotInstance, SolverGuard};

/// Settings for [`run_gamma_experiment`].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaConfig {
    pub levels: Vec<u32>,
    /// Defaults to halving from the largest factor diameter.
    pub schedule: Option<DeltaSchedule>,
    pub rep_rule: RepRule,
    pub guard: SolverGuard,
    /// Known optimal value of the limit problem, if any.
    pub analytic: Option<f64>,
}

impl GammaConfig {
    pub fn new(levels: Vec<u32>) -> Self {
        GammaConfig {
            levels,
            schedule: None,
            rep_rule: RepRule::Lexicographic,
            guard: SolverGuard::default(),
            analytic: None,
        }
    }

    pub fn with_analytic(mut self, value: f64) -> Self {
        self.analytic = Some(value);
        self
    }
}

/// Results of one discretization level.
#[derive(Clone, Debug)]
pub struct LevelRecord<W: Scalar> {
    pub level: u32,
    pub delta: f64,
    /// The discretized marginals `μ^{k,n}`.
    pub marginals: Vec<DiscreteMeasure<W>>,
    /// `min F_n` (or `min G_n`).
    pub min_value: CostValue<W>,
    pub minimizer: DiscreteCoupling<W>,
    /// Objective of the discretized plan `α^n`.
    pub objective_alpha: CostValue<W>,
    /// `objective(α^n) - min`; zero when the plan is finitely optimal.
    pub gap: CostValue<W>,
    /// Discrepancy between the minimizer and the base plan.
    pub discrepancy_to_limit: f64,
    /// `min - analytic`, when an analytic value is known.
    pub analytic_gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    Complete,
    /// Stopped by a resource guard at `level`; earlier levels are kept.
    Partial {
        level: u32,
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct GammaRun<W: Scalar> {
    pub plan: DiscreteCoupling<W>,
    pub cost: CostSpec,
    pub objective: Objective,
    pub analytic: Option<f64>,
    pub records: Vec<LevelRecord<W>>,
    pub status: RunStatus,
}

impl<W: Scalar> GammaRun<W> {
    /// Is `|min - analytic|` nonincreasing along the levels?
    pub fn analytic_gaps_nonincreasing(&self) -> Option<bool> {
        let gaps: Option<Vec<f64>> = self.records.iter().map(|r| r.analytic_gap.map(f64::abs)).collect();
        gaps.map(|g| g.windows(2).all(|w| w[1] <= w[0]))
    }

    pub fn finest(&self) -> Option<&LevelRecord<W>> {
        self.records.last()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,delta_n,min_value,objective_alpha,gap,discrepancy,analytic_gap\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{:e},{},{},{},{:e},{}",
                r.level,
                r.delta,
                r.min_value,
                r.objective_alpha,
                r.gap,
                r.discrepancy_to_limit,
                r.analytic_gap.map_or_else(|| "NA".into(), |g| format!("{g:e}")),
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            RunStatus::Complete => json!({"kind": "complete"}),
            RunStatus::Partial { level, reason } => json!({"kind": "partial", "level": level, "reason": reason}),
        };
        json!({
            "objective": self.objective,
            "cost": self.cost.to_json(),
            "analytic": self.analytic,
            "status": status,
            "levels": self.records.iter().map(|r| json!({
                "n": r.level,
                "delta": r.delta,
                "min_value": r.min_value.to_json(),
                "objective_alpha": r.objective_alpha.to_json(),
                "gap": r.gap.to_json(),
                "discrepancy_to_limit": r.discrepancy_to_limit,
                "analytic_gap": r.analytic_gap,
                "marginal_sizes": r.marginals.iter().map(DiscreteMeasure::len).collect::<Vec<_>>(),
                "minimizer": r.minimizer.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn run_level<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    level: u32,
    schedule: &DeltaSchedule,
    config: &GammaConfig,
) -> Result<LevelRecord<W>> {
    let part = plan_partition(plan, level, schedule)?;
    let alpha = discretize_plan(plan, &part, config.rep_rule)?;
    let marginals = alpha.marginals()?;
    let axes: Vec<_> = marginals.iter().map(|m| m.points().cloned().collect()).collect();
    let local = cost.restricted_to(&axes, W::POINT_TOL)?;
    let inst = MotInstance::new(marginals.clone(), local.clone(), objective)?;
    let sol = solve(&inst, &config.guard)?;
    let objective_alpha = objective_value(&local, &alpha, objective)?;
    let gap = objective_alpha
        .gap(&sol.value)
        .map_or(CostValue::Infinite, CostValue::Finite);
    let analytic_gap = config.analytic.map(|a| sol.value.to_f64() - a);
    Ok(LevelRecord {
        level,
        delta: part.delta(),
        marginals,
        discrepancy_to_limit: bl_discrepancy(&sol.plan, plan, REPORT_DICTIONARY)?,
        min_value: sol.value,
        minimizer: sol.plan,
        objective_alpha,
        gap,
        analytic_gap,
    })
}

/// Discretizes `plan` at every level, solves the discrete problem between
/// the discretized marginals and records the minima. Levels run in
/// parallel; a guard refusal truncates the run at the first refused level.
pub fn run_gamma_experiment<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    config: &GammaConfig,
) -> Result<GammaRun<W>> {
    if config.levels.is_empty() {
        return Err(Error::InvalidArgument("no levels".into()));
    }
    let mut levels = config.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    let schedule = config.schedule.unwrap_or_else(|| DeltaSchedule::halving(plan.spaces()));
    let results: Vec<Result<LevelRecord<W>>> = levels
        .par_iter()
        .map(|&n| run_level(plan, cost, objective, n, &schedule, config))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut status = RunStatus::Complete;
    for (r, &n) in results.into_iter().zip(&levels) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) if e.is_guard() => {
                status = RunStatus::Partial {
                    level: n,
                    reason: e.to_string(),
                };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GammaRun {
        plan: plan.clone(),
        cost: cost.clone(),
        objective,
        analytic: config.analytic,
        records,
        status,
    })
}
