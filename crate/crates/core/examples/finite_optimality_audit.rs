//! Samples small submeasures of a plan and compares each with the optimum
//! between its own marginals.
//!
//! cargo run --example finite_optimality_audit

use mmot::monotonicity::check_finite_optimality;
use mmot::solvers::SolverGuard;
use mmot::{CostSpec, DiscreteCoupling, FactorSpace, Objective, Point, Rational};

fn plan(ys: &[f64]) -> mmot::Result<DiscreteCoupling<Rational>> {
    let unit = FactorSpace::interval(0.0, 1.0)?;
    let n = ys.len() as f64;
    let tuples = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| vec![Point::scalar(i as f64 / n), Point::scalar(y)])
        .collect();
    DiscreteCoupling::uniform(vec![unit.clone(), unit], tuples)
}

fn main() -> mmot::Result<()> {
    let cost = CostSpec::power_distance(2.0)?;
    let guard = SolverGuard::default();
    for (name, ys) in [
        ("sorted", vec![0.1, 0.2, 0.45, 0.6, 0.7, 0.95]),
        ("one swap", vec![0.1, 0.2, 0.6, 0.45, 0.7, 0.95]),
    ] {
        let report = check_finite_optimality(&plan(&ys)?, &cost, Objective::Sum, 25, 4, 11, &guard)?;
        let beaten = report.trials.iter().filter(|t| !t.passed()).count();
        println!(
            "{name}: {beaten} of {} submeasures improvable, largest gap {}",
            report.trials.len(),
            report.max_gap().map_or("-".into(), |g| format!("{:.4}", g.to_f64()))
        );
    }
    Ok(())
}
