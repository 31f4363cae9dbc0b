//! The rotation `x -> x + alpha mod 1` under the cost 1 on the diagonal and
//! 2 elsewhere: no reassignment helps for irrational alpha, yet the
//! identity does better. A rational alpha closes a cycle and is caught.
//!
//! cargo run --example rotation_counterexample [alpha] [m] [k_max]

use mmot::experiments::{run_counterexample, Alpha};
use mmot::monotonicity::SearchGuard;
use mmot::solvers::SolverGuard;

fn main() -> mmot::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let alphas: Vec<Alpha> = match args.first() {
        Some(a) => vec![a.parse()?],
        None => vec![Alpha::sqrt2m1(), Alpha::golden(), Alpha::rational(1, 3)?],
    };
    let m = args.get(1).map_or(Ok(30), |s| s.parse()).expect("m is an integer");
    let k_max = args.get(2).map_or(Ok(4), |s| s.parse()).expect("k_max is an integer");

    for alpha in alphas {
        let run = run_counterexample(alpha, m, k_max, &SearchGuard::default(), &SolverGuard::default())?;
        println!("alpha = {alpha}, m = {m}");
        match &run.certificate {
            Some(c) => println!("    certificate: k = {}, max cost {} -> {}", c.k(), c.before, c.after),
            None => println!("    no certificate up to k = {k_max}"),
        }
        println!("    sup cost of the rotation:       {}", run.rotation_sup);
        println!("    optimum between its marginals:  {}", run.rotation_optimum);
        println!(
            "    identity vs one-step shift:     {} vs {}",
            run.identity_sup, run.shifted_sup
        );
        println!("    as expected: {}", run.expectation_met());
    }
    Ok(())
}
