#![allow(dead_code)]

use std::collections::BTreeMap;

use mmot::{DiscreteCoupling, DiscreteMeasure, FactorSpace, Point, Rational, Scalar};
use rand::seq::index;
use rand::Rng;

pub fn unit() -> FactorSpace {
    FactorSpace::interval(0.0, 1.0).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// `count` distinct points of the grid `{j / den : 0 <= j <= den}`.
pub fn grid_points<R: Rng>(rng: &mut R, count: usize, den: u32) -> Vec<Point> {
    let mut js = index::sample(rng, den as usize + 1, count).into_vec();
    js.sort_unstable();
    js.into_iter().map(|j| Point::scalar(j as f64 / den as f64)).collect()
}

pub fn uniform_measure(points: Vec<Point>) -> DiscreteMeasure<Rational> {
    DiscreteMeasure::uniform(unit(), points).unwrap()
}

/// Positive integer weights normalised to one.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| q(w, total)).collect()
}

/// Plan on `[0, 1]^arity` with `atoms` random tuples, duplicates merged.
pub fn random_plan<R: Rng>(rng: &mut R, arity: usize, atoms: usize) -> DiscreteCoupling<Rational> {
    let weights = random_weights(rng, atoms);
    let atoms = weights
        .into_iter()
        .map(|w| {
            let t = (0..arity).map(|_| Point::scalar(rng.random::<f64>())).collect();
            (t, w)
        })
        .collect();
    DiscreteCoupling::from_unmerged(vec![unit(); arity], atoms).unwrap()
}

/// Mass of each 1-d point of marginal `k` (0-based), keyed by bit pattern.
pub fn marginal_map<W: Scalar>(plan: &DiscreteCoupling<W>, k: usize) -> BTreeMap<u64, Rational> {
    let mut out = BTreeMap::new();
    for (t, w) in plan.atoms() {
        *out.entry(t[k].0[0].to_bits()).or_insert_with(|| q(0, 1)) += w.to_rational();
    }
    out
}

pub fn measure_map<W: Scalar>(m: &DiscreteMeasure<W>) -> BTreeMap<u64, Rational> {
    let mut out = BTreeMap::new();
    for (p, w) in m.atoms() {
        *out.entry(p.0[0].to_bits()).or_insert_with(|| q(0, 1)) += w.to_rational();
    }
    out
}

/// Dyadic cell of `x` in `[0, 1]` at depth `s`, last cell closed.
pub fn dyadic_cell(x: f64, s: u32) -> u64 {
    let cells = 1u64 << s;
    ((x * cells as f64).floor() as u64).min(cells - 1)
}

/// Masses of marginal `k` per dyadic cell at depth `s`.
pub fn cell_mass_map<W: Scalar>(plan: &DiscreteCoupling<W>, k: usize, s: u32) -> BTreeMap<u64, Rational> {
    let mut out = BTreeMap::new();
    for (t, w) in plan.atoms() {
        *out.entry(dyadic_cell(t[k].0[0], s)).or_insert_with(|| q(0, 1)) += w.to_rational();
    }
    out
}

/// Monotone (quantile) coupling cost of two 1-d measures under `|x - y|^2`.
pub fn monotone_rearrangement_cost(mu: &DiscreteMeasure<Rational>, nu: &DiscreteMeasure<Rational>) -> Rational {
    let sorted = |m: &DiscreteMeasure<Rational>| {
        let mut a: Vec<(f64, Rational)> = m.atoms().iter().map(|(p, w)| (p.0[0], w.clone())).collect();
        a.sort_by(|x, y| x.0.total_cmp(&y.0));
        a
    };
    let (mut a, mut b) = (sorted(mu), sorted(nu));
    let (mut i, mut j) = (0, 0);
    let mut total = q(0, 1);
    while i < a.len() && j < b.len() {
        let moved = a[i].1.clone().min(b[j].1.clone());
        let d = a[i].0 - b[j].0;
        total += Rational::from_f64(d * d) * &moved;
        a[i].1 -= &moved;
        b[j].1 -= &moved;
        if a[i].1 == q(0, 1) {
            i += 1;
        }
        if b[j].1 == q(0, 1) {
            j += 1;
        }
    }
    total
}
