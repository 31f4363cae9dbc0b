//! Searches plan supports for cyclical-monotonicity violations and prints
//! the certificate, which can be checked again on its own.
//!
//! cargo run --example certify_monotonicity

use mmot::monotonicity::{check_cm, check_icm, Certificate, SearchGuard};
use mmot::{CostSpec, Point, Rational};

fn pairs(xy: &[(f64, f64)]) -> Vec<Vec<Point>> {
    xy.iter()
        .map(|&(x, y)| vec![Point::scalar(x), Point::scalar(y)])
        .collect()
}

fn main() -> mmot::Result<()> {
    let guard = SearchGuard::default();
    let quadratic = CostSpec::power_distance(2.0)?;

    let monotone = pairs(&[(0.0, 0.125), (0.375, 0.625), (0.75, 0.875)]);
    let found = check_cm::<Rational>(&monotone, &quadratic, 3, &guard)?;
    println!(
        "monotone map: {}",
        if found.is_some() {
            "violation"
        } else {
            "no violation up to k = 3"
        }
    );

    let crossed = pairs(&[(0.0, 0.875), (0.375, 0.625), (0.75, 0.125)]);
    let cert = check_cm::<Rational>(&crossed, &quadratic, 3, &guard)?.expect("crossing pairs can be improved");
    println!("crossed map: k = {}, cost {} -> {}", cert.k(), cert.before, cert.after);
    println!("{}", serde_json::to_string_pretty(&cert.to_json()).unwrap());

    let reread = Certificate::<Rational>::from_json(&cert.to_json())?;
    println!("re-read certificate verifies: {}", reread.verify(&quadratic)?);

    // under a sup cost only the largest reassigned value counts
    let cyclic = pairs(&[(0.0, 0.5), (0.5, 0.0), (0.25, 0.75)]);
    let indicator = CostSpec::equality_indicator(1.0, 2.0)?;
    match check_icm::<Rational>(&cyclic, &indicator, 3, &guard)? {
        Some(c) => println!("indicator cost: k = {}, max {} -> {}", c.k(), c.before, c.after),
        None => println!("indicator cost: no violation"),
    }
    Ok(())
}
