use serde_json::{json, Value};

use crate::costs::{CostSpec, CostValue, Objective};
use crate::error::Result;
use crate::measures::DiscreteCoupling;
use crate::monotonicity::{check_finite_optimality, find_violation, AuditReport, Certificate, SearchGuard};
use crate::scalar::{Scalar, FLOAT_LP_TOL};

use super::gamma::{run_gamma_experiment, GammaConfig, GammaRun, RunStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Monotonicity,
    FiniteOptimality,
    GammaConvergence,
}

impl Stage {
    pub fn number(self) -> u8 {
        match self {
            Stage::Monotonicity => 1,
            Stage::FiniteOptimality => 2,
            Stage::GammaConvergence => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Monotonicity => "monotonicity",
            Stage::FiniteOptimality => "finite-optimality",
            Stage::GammaConvergence => "gamma-convergence",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub k_max: usize,
    pub search: SearchGuard,
    pub trials: usize,
    pub seed: u64,
    pub gamma: GammaConfig,
    /// Allowed `|min - analytic|` at the finest level.
    pub analytic_tol: f64,
}

impl VerifyConfig {
    pub fn new(k_max: usize, levels: Vec<u32>) -> Self {
        VerifyConfig {
            k_max,
            search: SearchGuard::default(),
            trials: 50,
            seed: 0,
            gamma: GammaConfig::new(levels),
            analytic_tol: 1e-3,
        }
    }
}

/// Outcome of [`verify_optimality_theorem`]. Later stages are skipped once
/// one fails.
#[derive(Clone, Debug)]
pub struct Verdict<W: Scalar> {
    pub failed: Option<(Stage, String)>,
    pub certificate: Option<Certificate<W>>,
    pub audit: Option<AuditReport<W>>,
    pub gamma: Option<GammaRun<W>>,
}

impl<W: Scalar> Verdict<W> {
    pub fn passed(&self) -> bool {
        self.failed.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": if self.passed() { "PASS" } else { "FAIL" },
            "failed_stage": self.failed.as_ref().map(|(s, _)| json!({
                "stage": s.number(),
                "name": s.name(),
                "reason": self.failed.as_ref().map(|(_, r)| r.clone()),
            })),
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
            "audit": self.audit.as_ref().map(AuditReport::to_json),
            "gamma": self.gamma.as_ref().map(GammaRun::to_json),
        })
    }
}

/// Runs (1) the CM/ICM search on the support, (2) the finite-optimality
/// audit with submeasures of at most `k_max` atoms and (3) the Γ-experiment.
/// Passes iff there is no certificate, no positive audit gap, every level
/// has `objective(α^n) = min`, and the finest minimum matches the analytic
/// value when one is given.
pub fn verify_optimality_theorem<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    config: &VerifyConfig,
) -> Result<Verdict<W>> {
    let mut verdict = Verdict {
        failed: None,
        certificate: None,
        audit: None,
        gamma: None,
    };

    let cert = find_violation::<W>(&plan.support(), cost, objective, config.k_max, &config.search)?;
    if let Some(c) = cert {
        verdict.failed = Some((
            Stage::Monotonicity,
            format!(
                "reassigning {} tuples lowers the cost from {} to {}",
                c.k(),
                c.before,
                c.after
            ),
        ));
        verdict.certificate = Some(c);
        return Ok(verdict);
    }

    let audit = check_finite_optimality(
        plan,
        cost,
        objective,
        config.trials,
        config.k_max,
        config.seed,
        &config.gamma.guard,
    )?;
    let audit_ok = audit.passed();
    if !audit_ok {
        verdict.failed = Some((
            Stage::FiniteOptimality,
            format!(
                "a sampled submeasure is beaten by {}",
                audit.max_gap().unwrap_or(CostValue::Infinite)
            ),
        ));
    }
    verdict.audit = Some(audit);
    if !audit_ok {
        return Ok(verdict);
    }

    let run = run_gamma_experiment(plan, cost, objective, &config.gamma)?;
    let bad_level = run.records.iter().find(|r| match &r.gap {
        CostValue::Finite(g) => !g.tol_is_zero(FLOAT_LP_TOL),
        CostValue::Infinite => true,
    });
    let reason = if let RunStatus::Partial { level, reason } = &run.status {
        Some(format!("level {level} refused: {reason}"))
    } else if let Some(r) = bad_level {
        Some(format!("level {}: objective(alpha^n) - min = {}", r.level, r.gap))
    } else {
        run.finest()
            .and_then(|r| r.analytic_gap)
            .filter(|g| g.abs() > config.analytic_tol)
            .map(|g| format!("finest minimum differs from the analytic value by {g}"))
    };
    verdict.failed = reason.map(|r| (Stage::GammaConvergence, r));
    verdict.gamma = Some(run);
    Ok(verdict)
}
