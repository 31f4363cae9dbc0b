//! Rounds two real-weighted couplings with equal marginals to nearby
//! rational weights whose marginals are still exactly equal.
//!
//! cargo run --example rationalize_weights

use mmot::monotonicity::{rationalize_pair, IntegerCoupling};
use mmot::{DiscreteCoupling, FactorSpace, Point, Rational};

fn main() -> mmot::Result<()> {
    let unit = FactorSpace::interval(0.0, 1.0)?;
    let t = |x: f64, y: f64| vec![Point::scalar(x), Point::scalar(y)];
    let w = 1.0 / std::f64::consts::PI;
    let spaces = vec![unit.clone(), unit];
    let a = DiscreteCoupling::new(spaces.clone(), vec![(t(0.0, 0.0), w), (t(1.0, 1.0), 1.0 - w)])?;
    let b = DiscreteCoupling::new(
        spaces,
        vec![
            (t(0.0, 0.0), w / 2.0),
            (t(0.0, 1.0), w / 2.0),
            (t(1.0, 0.0), w / 2.0),
            (t(1.0, 1.0), 1.0 - 1.5 * w),
        ],
    )?;

    for eps in [
        Rational::new(1.into(), 100.into()),
        Rational::new(1.into(), 10_000.into()),
    ] {
        let (ra, rb) = rationalize_pair(&a, &b, &eps)?;
        println!("eps = {eps}");
        for (t, w) in ra.atoms() {
            println!("    A {} {}  {w}", t[0], t[1]);
        }
        for (t, w) in rb.atoms() {
            println!("    B {} {}  {w}", t[0], t[1]);
        }
        println!("    marginals equal: {}", ra.marginals()? == rb.marginals()?);
        let (ia, ib) = IntegerCoupling::scale_pair(&ra, &rb)?;
        println!("    common integer mass: {} = {}", ia.total(), ib.total());
    }
    Ok(())
}
