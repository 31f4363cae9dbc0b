//! Integral and bottleneck optima of a small two-marginal problem, checked
//! against the brute-force oracle, plus a three-marginal barycenter cost.
//!
//! cargo run --example solve_instances

use mmot::solvers::{brute_force_oracle, solve_integral_mot, solve_sup_mot, SolverGuard};
use mmot::{CostSpec, DiscreteMeasure, FactorSpace, MotInstance, Objective, Point, Rational};

fn uniform(xs: &[f64]) -> DiscreteMeasure<Rational> {
    let line = FactorSpace::interval(0.0, 4.0).unwrap();
    DiscreteMeasure::uniform(line, xs.iter().map(|&x| Point::scalar(x)).collect()).unwrap()
}

fn main() -> mmot::Result<()> {
    let guard = SolverGuard::default();
    let mu = uniform(&[0.0, 1.0, 2.0, 3.5]);
    let nu = uniform(&[0.5, 1.0, 3.0, 4.0]);

    for p in [1.0, 2.0] {
        let inst = MotInstance::new(
            vec![mu.clone(), nu.clone()],
            CostSpec::power_distance(p)?,
            Objective::Sum,
        )?;
        let sol = solve_integral_mot(&inst, &guard)?;
        let oracle = brute_force_oracle(&inst)?;
        println!("|x - y|^{p}: integral optimum {} (oracle {})", sol.value, oracle.value);
        for (t, w) in sol.plan.atoms() {
            println!("    {} -> {}  mass {w}", t[0], t[1]);
        }

        let inst = inst.with_objective(Objective::Max);
        let sol = solve_sup_mot(&inst, &guard)?;
        println!(
            "|x - y|^{p}: bottleneck optimum {} (oracle {})",
            sol.value,
            brute_force_oracle(&inst)?.value
        );
    }

    // three marginals under the squared distance to the barycenter
    let a = uniform(&[0.0, 2.0]);
    let b = uniform(&[1.0, 3.0]);
    let c = uniform(&[0.5, 4.0]);
    let inst = MotInstance::new(vec![a, b, c], CostSpec::SquaredSumBarycenter, Objective::Sum)?;
    let sol = solve_integral_mot(&inst, &guard)?;
    println!("barycenter cost, three marginals: {}", sol.value);
    println!("{}", serde_json::to_string_pretty(&sol.to_json()).unwrap());
    Ok(())
}
