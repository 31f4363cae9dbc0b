//! Discretizes a plan on nested dyadic partitions and prints the
//! convergence table, then glues a plan onto discretized marginals.
//!
//! cargo run --example dyadic_discretization

use mmot::discretization::{
    convergence_report, discretize_plan, plan_partition, recovery_sequence, report_csv, DeltaSchedule, RepRule,
};
use mmot::{CostSpec, DiscreteCoupling, FactorSpace, Objective, Point, Rational};

fn main() -> mmot::Result<()> {
    let unit = FactorSpace::interval(0.0, 1.0)?;
    let tuples: Vec<Vec<Point>> = (0..24)
        .map(|i| {
            let x = (i as f64 + 0.5) / 24.0;
            vec![Point::scalar(x), Point::scalar(x * x)]
        })
        .collect();
    let plan = DiscreteCoupling::<Rational>::uniform(vec![unit.clone(), unit], tuples)?;
    let schedule = DeltaSchedule::halving(plan.spaces());

    for n in 1..=3 {
        let part = plan_partition(&plan, n, &schedule)?;
        let alpha = discretize_plan(&plan, &part, RepRule::CentroidNearest)?;
        let cells: Vec<usize> = part.grids().iter().map(|g| g.cells().len()).collect();
        println!(
            "level {n}: delta {:.4}, cells per factor {cells:?}, {} atoms",
            part.delta(),
            alpha.len()
        );
    }

    let cost = CostSpec::power_distance(2.0)?;
    let rows = convergence_report(&plan, &cost, Objective::Sum, &[1, 2, 3, 4], &schedule)?;
    print!("{}", report_csv(&rows));

    // glue the plan onto the level-2 discretized marginals
    let part = plan_partition(&plan, 2, &schedule)?;
    let targets = discretize_plan(&plan, &part, RepRule::Lexicographic)?.marginals()?;
    let beta = recovery_sequence(&plan, &part, &targets)?;
    println!(
        "recovery sequence: {} atoms, marginals match: {}",
        beta.len(),
        beta.marginals()? == targets
    );
    Ok(())
}
