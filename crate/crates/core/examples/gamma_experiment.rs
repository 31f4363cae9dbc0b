//! Minima of the discretized problems for the shift `x -> x + 1/2` under
//! the quadratic cost, then the full three-stage optimality check.
//!
//! cargo run --example gamma_experiment

use mmot::experiments::{run_gamma_experiment, shift_plan, verify_optimality_theorem, GammaConfig, VerifyConfig};
use mmot::{CostSpec, Objective, Rational};

fn main() -> mmot::Result<()> {
    let plan = shift_plan::<Rational>(16, Rational::new(1.into(), 2.into()))?;
    let cost = CostSpec::power_distance(2.0)?;

    let cfg = GammaConfig::new(vec![1, 2, 3, 4, 5]).with_analytic(0.25);
    let run = run_gamma_experiment(&plan, &cost, Objective::Sum, &cfg)?;
    print!("{}", run.to_csv());
    println!("|min - 1/4| nonincreasing: {:?}", run.analytic_gaps_nonincreasing());

    let mut check = VerifyConfig::new(3, vec![1, 2, 3]);
    check.trials = 20;
    check.gamma.analytic = Some(0.25);
    let verdict = verify_optimality_theorem(&plan, &cost, Objective::Sum, &check)?;
    match &verdict.failed {
        None => println!("verdict: PASS"),
        Some((stage, reason)) => println!("verdict: FAIL at {}: {reason}", stage.name()),
    }
    Ok(())
}
