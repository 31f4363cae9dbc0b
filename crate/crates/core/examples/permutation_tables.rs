//! Two integer-weight couplings with the same marginals differ by one
//! permutation per column of their multiplicity tables.
//!
//! cargo run --example permutation_tables

use mmot::monotonicity::{apply_permutations, expand_to_table, find_permutations, IntegerCoupling};
use mmot::Point;

fn t(x: f64, y: f64, z: f64) -> Vec<Point> {
    vec![Point::scalar(x), Point::scalar(y), Point::scalar(z)]
}

fn main() -> mmot::Result<()> {
    let a = IntegerCoupling::new(vec![(t(0.0, 0.0, 1.0), 2), (t(1.0, 1.0, 0.0), 1)])?;
    let b = IntegerCoupling::new(vec![
        (t(0.0, 1.0, 0.0), 1),
        (t(0.0, 0.0, 1.0), 1),
        (t(1.0, 0.0, 1.0), 1),
    ])?;
    let ta = expand_to_table(&a);
    let tb = expand_to_table(&b);
    println!("table A:");
    for r in &ta.rows {
        println!(
            "    {}",
            r.iter().map(ToString::to_string).collect::<Vec<_>>().join("  ")
        );
    }

    let sigmas = find_permutations(&ta, &tb)?.expect("the marginals agree");
    for (k, s) in sigmas.iter().enumerate() {
        let one_based: Vec<usize> = s.iter().map(|j| j + 1).collect();
        println!("sigma_{} = {one_based:?}", k + 2);
    }
    let rebuilt = apply_permutations(&ta, &sigmas);
    println!("rows of B recovered: {}", rebuilt.row_multiset() == tb.row_multiset());
    Ok(())
}
