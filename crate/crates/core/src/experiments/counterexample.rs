use serde_json::{json, Value};

use crate::costs::{sup_cost, CostSpec, CostValue};
use crate::error::{Error, Result};
use crate::monotonicity::{check_icm, Certificate, SearchGuard};
use crate::scalar::Rational;
use crate::solvers::{solve_sup_mot, MotInstance, SolverGuard};

use super::fixtures::{diagonal_plan, rotation_plan, uniform_grid, Alpha};

/// The rotation example under the cost `1` on the diagonal, `2` off it.
#[derive(Clone, Debug)]
pub struct CounterexampleRun {
    pub alpha: Alpha,
    pub m: usize,
    pub k_max: usize,
    pub certificate: Option<Certificate<Rational>>,
    /// `C∞` of the rotation plan.
    pub rotation_sup: CostValue<Rational>,
    /// Optimal `C∞` between the rotation plan's own marginals.
    pub rotation_optimum: CostValue<Rational>,
    /// Optimal `C∞` with both marginals on the `m`-grid (the identity).
    pub identity_sup: CostValue<Rational>,
    /// `C∞` of the one-step grid shift, same marginals as the identity.
    pub shifted_sup: CostValue<Rational>,
}

impl CounterexampleRun {
    /// Does the outcome match the cycle-closure argument? A certificate
    /// (before 2, after 1, `k = q`) must exist exactly when `α = p/q` with
    /// `2 <= q <= k_max` and `q | m`.
    pub fn expectation_met(&self) -> bool {
        let two = CostValue::Finite(Rational::from_integer(2.into()));
        let one = CostValue::Finite(Rational::from_integer(1.into()));
        let (closes, identity) = match self.alpha {
            Alpha::Rational { q, .. } => {
                let q = q as usize;
                (q >= 2 && q <= self.k_max && self.m.is_multiple_of(q), q == 1)
            }
            Alpha::Real(_) => (false, false),
        };
        let cert_ok = match &self.certificate {
            Some(c) => closes && c.before == two && c.after == one,
            None => !closes,
        };
        let sup_ok = if identity {
            self.rotation_sup == one
        } else {
            self.rotation_sup == two
        };
        cert_ok && sup_ok && self.identity_sup == one && (self.m < 2 || self.shifted_sup == two)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha.to_string(),
            "m": self.m,
            "k_max": self.k_max,
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
            "rotation_sup": self.rotation_sup.to_json(),
            "rotation_optimum": self.rotation_optimum.to_json(),
            "identity_sup": self.identity_sup.to_json(),
            "shifted_sup": self.shifted_sup.to_json(),
            "expectation_met": self.expectation_met(),
        })
    }
}

pub fn indicator_cost() -> CostSpec {
    CostSpec::equality_indicator(1.0, 2.0).expect("valid indicator")
}

pub fn run_counterexample(
    alpha: Alpha,
    m: usize,
    k_max: usize,
    search: &SearchGuard,
    solver: &SolverGuard,
) -> Result<CounterexampleRun> {
    if m < 2 {
        return Err(Error::InvalidArgument("m must be at least 2".into()));
    }
    let cost = indicator_cost();
    let rotation = rotation_plan::<Rational>(alpha, m)?;
    let certificate = check_icm(&rotation.support(), &cost, k_max, search)?;
    let rotation_sup = sup_cost(&cost, &rotation)?;
    let inst = MotInstance::new(rotation.marginals()?, cost.clone(), crate::Objective::Max)?;
    let rotation_optimum = solve_sup_mot(&inst, solver)?.value;

    let grid = uniform_grid::<Rational>(m)?;
    let inst = MotInstance::new(vec![grid.clone(), grid], cost.clone(), crate::Objective::Max)?;
    let identity_sup = solve_sup_mot(&inst, solver)?.value;
    debug_assert_eq!(identity_sup, sup_cost(&cost, &diagonal_plan::<Rational>(m)?)?);
    let shifted = rotation_plan::<Rational>(Alpha::rational(1, m as i64)?, m)?;
    let shifted_sup = sup_cost(&cost, &shifted)?;

    Ok(CounterexampleRun {
        alpha,
        m,
        k_max,
        certificate,
        rotation_sup,
        rotation_optimum,
        identity_sup,
        shifted_sup,
    })
}
