//! Finitely supported measures on boxes and couplings on their products.

mod discrepancy;
pub mod json;

use std::collections::HashMap;
use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, FLOAT_MASS_TOL};

pub use discrepancy::{bl_discrepancy, TestDictionary};

/// A point of one factor space.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn scalar(x: f64) -> Self {
        Point(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Coordinatewise equality up to `tol` (exact when `tol == 0`).
    pub fn same_as(&self, other: &Point, tol: f64) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a == b || (a - b).abs() <= tol)
    }

    /// Hashable identity for exact comparisons.
    pub fn key(&self) -> PointKey {
        PointKey(
            self.0
                .iter()
                .map(|x| if *x == 0.0 { 0u64 } else { x.to_bits() })
                .collect(),
        )
    }

    pub(crate) fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointKey(Vec<u64>);

/// Lexicographic order on tuples of points.
pub(crate) fn tuple_lex_cmp(a: &[Point], b: &[Point]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.lex_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn tuple_key(t: &[Point]) -> Vec<PointKey> {
    t.iter().map(Point::key).collect()
}

/// An axis-aligned compact box in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpace {
    bounds: Vec<(f64, f64)>,
}

impl FactorSpace {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidMeasure("factor space needs dim >= 1".into()));
        }
        for &(lo, hi) in &bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidMeasure(format!("bad axis bounds [{lo}, {hi}]")));
            }
        }
        Ok(FactorSpace { bounds })
    }

    /// The box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi); dim])
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && p.0.iter().zip(&self.bounds).all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        self.bounds
            .iter()
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        if p.0.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-finite point {p}")));
        }
        if !self.contains(p) {
            return Err(Error::InvalidMeasure(format!("point {p} outside bounds")));
        }
        Ok(())
    }
}

fn check_total<W: Scalar>(total: &W) -> Result<()> {
    if total.tol_eq(&W::one(), FLOAT_MASS_TOL) {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")))
    }
}

/// A finitely supported probability measure on one factor space.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<W: Scalar> {
    space: FactorSpace,
    atoms: Vec<(Point, W)>,
}

impl<W: Scalar> DiscreteMeasure<W> {
    pub fn new(space: FactorSpace, atoms: Vec<(Point, W)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = W::zero();
        for (p, w) in &atoms {
            space.check_point(p)?;
            if !w.tol_is_positive(0.0) {
                return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
            }
            total = total + w.clone();
        }
        check_total(&total)?;
        for i in 0..atoms.len() {
            for j in 0..i {
                if atoms[i].0.same_as(&atoms[j].0, W::POINT_TOL) {
                    return Err(Error::InvalidMeasure(format!("duplicate atom {}", atoms[i].0)));
                }
            }
        }
        Ok(DiscreteMeasure { space, atoms })
    }

    /// Uniform weights on the given distinct points.
    pub fn uniform(space: FactorSpace, points: Vec<Point>) -> Result<Self> {
        let n = points.len() as i64;
        let atoms = points.into_iter().map(|p| (p, W::from_ratio(1, n.max(1)))).collect();
        Self::new(space, atoms)
    }

    pub fn dirac(space: FactorSpace, p: Point) -> Result<Self> {
        Self::new(space, vec![(p, W::one())])
    }

    pub fn space(&self) -> &FactorSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[(Point, W)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.atoms.iter().map(|(p, _)| p)
    }

    pub fn total_mass(&self) -> W {
        self.atoms.iter().fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Mass of the atom at `p`, zero if absent.
    pub fn mass_at(&self, p: &Point) -> W {
        self.atoms
            .iter()
            .find(|(q, _)| q.same_as(p, W::POINT_TOL))
            .map(|(_, w)| w.clone())
            .unwrap_or_else(W::zero)
    }

    /// Same atoms, merged and sorted lexicographically by point.
    pub fn canonical(&self) -> Vec<(Point, W)> {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| a.0.lex_cmp(&b.0));
        atoms
    }

    pub fn map_weights<V: Scalar>(&self, f: impl Fn(&W) -> V) -> Result<DiscreteMeasure<V>> {
        DiscreteMeasure::new(
            self.space.clone(),
            self.atoms.iter().map(|(p, w)| (p.clone(), f(w))).collect(),
        )
    }
}

/// A finitely supported probability measure on a product of `N >= 2` boxes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCoupling<W: Scalar> {
    spaces: Vec<FactorSpace>,
    atoms: Vec<(Vec<Point>, W)>,
}

impl<W: Scalar> DiscreteCoupling<W> {
    pub fn new(spaces: Vec<FactorSpace>, atoms: Vec<(Vec<Point>, W)>) -> Result<Self> {
        if spaces.len() < 2 {
            return Err(Error::InvalidMeasure(format!(
                "a coupling needs N >= 2 factors, got {}",
                spaces.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = W::zero();
        for (t, w) in &atoms {
            if t.len() != spaces.len() {
                return Err(Error::DimensionMismatch {
                    expected: spaces.len(),
                    got: t.len(),
                });
            }
            for (p, s) in t.iter().zip(&spaces) {
                s.check_point(p)?;
            }
            if !w.tol_is_positive(0.0) {
                return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
            }
            total = total + w.clone();
        }
        check_total(&total)?;
        if W::POINT_TOL == 0.0 {
            let mut seen = std::collections::HashSet::new();
            for (t, _) in &atoms {
                if !seen.insert(tuple_key(t)) {
                    return Err(Error::InvalidMeasure("duplicate support tuple".into()));
                }
            }
        } else {
            for i in 0..atoms.len() {
                for j in 0..i {
                    if tuples_match(&atoms[i].0, &atoms[j].0, W::POINT_TOL) {
                        return Err(Error::InvalidMeasure("duplicate support tuple".into()));
                    }
                }
            }
        }
        Ok(DiscreteCoupling { spaces, atoms })
    }

    /// Builds a coupling after summing the weights of repeated tuples and
    /// dropping zero weights.
    pub fn from_unmerged(spaces: Vec<FactorSpace>, atoms: Vec<(Vec<Point>, W)>) -> Result<Self> {
        let mut merged: Vec<(Vec<Point>, W)> = Vec::with_capacity(atoms.len());
        let mut index: HashMap<Vec<PointKey>, usize> = HashMap::new();
        for (t, w) in atoms {
            let hit = if W::POINT_TOL == 0.0 {
                index.get(&tuple_key(&t)).copied()
            } else {
                merged.iter().position(|(u, _)| tuples_match(u, &t, W::POINT_TOL))
            };
            match hit {
                Some(i) => merged[i].1 = merged[i].1.clone() + w,
                None => {
                    if W::POINT_TOL == 0.0 {
                        index.insert(tuple_key(&t), merged.len());
                    }
                    merged.push((t, w));
                }
            }
        }
        merged.retain(|(_, w)| !w.tol_is_zero(0.0));
        Self::new(spaces, merged)
    }

    /// Uniform weights over the given distinct tuples.
    pub fn uniform(spaces: Vec<FactorSpace>, tuples: Vec<Vec<Point>>) -> Result<Self> {
        let n = tuples.len() as i64;
        let atoms = tuples.into_iter().map(|t| (t, W::from_ratio(1, n.max(1)))).collect();
        Self::new(spaces, atoms)
    }

    /// The product coupling of the given marginals.
    pub fn product(marginals: &[DiscreteMeasure<W>]) -> Result<Self> {
        let spaces = marginals.iter().map(|m| m.space().clone()).collect();
        let mut atoms: Vec<(Vec<Point>, W)> = vec![(Vec::new(), W::one())];
        for m in marginals {
            let mut next = Vec::with_capacity(atoms.len() * m.len());
            for (t, w) in &atoms {
                for (p, v) in m.atoms() {
                    let mut t2 = t.clone();
                    t2.push(p.clone());
                    next.push((t2, w.clone() * v.clone()));
                }
            }
            atoms = next;
        }
        Self::new(spaces, atoms)
    }

    pub fn spaces(&self) -> &[FactorSpace] {
        &self.spaces
    }

    /// Number of factors `N`.
    pub fn arity(&self) -> usize {
        self.spaces.len()
    }

    pub fn atoms(&self) -> &[(Vec<Point>, W)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn support(&self) -> Vec<Vec<Point>> {
        self.atoms.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn total_mass(&self) -> W {
        self.atoms.iter().fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// The `k`-th marginal, with `k` counted from 1.
    pub fn marginal(&self, k: usize) -> Result<DiscreteMeasure<W>> {
        if k == 0 || k > self.arity() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.arity(),
            });
        }
        let atoms = merge_points(self.atoms.iter().map(|(t, w)| (&t[k - 1], w)));
        DiscreteMeasure::new(self.spaces[k - 1].clone(), atoms)
    }

    pub fn marginals(&self) -> Result<Vec<DiscreteMeasure<W>>> {
        (1..=self.arity()).map(|k| self.marginal(k)).collect()
    }

    /// Do the marginals of `self` equal `targets` (exactly, or within `tol`
    /// in float mode)?
    pub fn has_marginals(&self, targets: &[DiscreteMeasure<W>], tol: f64) -> bool {
        if targets.len() != self.arity() {
            return false;
        }
        targets.iter().enumerate().all(|(k, target)| {
            let Ok(m) = self.marginal(k + 1) else {
                return false;
            };
            same_atoms(m.atoms(), target.atoms(), tol)
        })
    }

    /// `t * a + (1 - t) * b`, merging shared tuples.
    pub fn mixture(a: &Self, b: &Self, t: &W) -> Result<Self> {
        if a.spaces != b.spaces {
            return Err(Error::SpaceMismatch("mixture of couplings on different spaces".into()));
        }
        let s = W::one() - t.clone();
        let atoms = a
            .atoms
            .iter()
            .map(|(x, w)| (x.clone(), t.clone() * w.clone()))
            .chain(b.atoms.iter().map(|(x, w)| (x.clone(), s.clone() * w.clone())))
            .collect();
        Self::from_unmerged(a.spaces.clone(), atoms)
    }

    /// Same support with new weights (in the same order).
    pub fn reweighted<V: Scalar>(&self, weights: Vec<V>) -> Result<DiscreteCoupling<V>> {
        if weights.len() != self.len() {
            return Err(Error::InvalidArgument("weight vector length".into()));
        }
        DiscreteCoupling::new(
            self.spaces.clone(),
            self.atoms
                .iter()
                .zip(weights)
                .map(|((t, _), w)| (t.clone(), w))
                .collect(),
        )
    }

    pub fn map_weights<V: Scalar>(&self, f: impl Fn(&W) -> V) -> Result<DiscreteCoupling<V>> {
        self.reweighted(self.atoms.iter().map(|(_, w)| f(w)).collect())
    }

    /// Atoms sorted lexicographically by tuple.
    pub fn canonical(&self) -> Vec<(Vec<Point>, W)> {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| tuple_lex_cmp(&a.0, &b.0));
        atoms
    }
}

pub(crate) fn tuples_match(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.same_as(q, tol))
}

/// Sums the weights of coinciding points, keeping first-appearance order.
fn merge_points<'a, W: Scalar>(it: impl Iterator<Item = (&'a Point, &'a W)>) -> Vec<(Point, W)> {
    let mut out: Vec<(Point, W)> = Vec::new();
    let mut index: HashMap<PointKey, usize> = HashMap::new();
    for (p, w) in it {
        let hit = if W::POINT_TOL == 0.0 {
            index.get(&p.key()).copied()
        } else {
            out.iter().position(|(q, _)| q.same_as(p, W::POINT_TOL))
        };
        match hit {
            Some(i) => out[i].1 = out[i].1.clone() + w.clone(),
            None => {
                if W::POINT_TOL == 0.0 {
                    index.insert(p.key(), out.len());
                }
                out.push((p.clone(), w.clone()));
            }
        }
    }
    out
}

pub(crate) fn same_atoms<W: Scalar>(a: &[(Point, W)], b: &[(Point, W)], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter().all(|(p, w)| {
        b.iter()
            .find(|(q, _)| q.same_as(p, W::POINT_TOL))
            .is_some_and(|(_, v)| v.tol_eq(w, tol))
    })
}

/// Uniform probability measure on `l` distinct support tuples of `plan`,
/// chosen by a seeded generator.
pub fn sample_submeasure<W: Scalar>(plan: &DiscreteCoupling<W>, l: usize, seed: u64) -> Result<DiscreteCoupling<W>> {
    if l < 1 || l > plan.len() {
        return Err(Error::InvalidArgument(format!(
            "submeasure size {l} must lie in 1..={}",
            plan.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = index::sample(&mut rng, plan.len(), l).into_vec();
    chosen.sort_unstable();
    let tuples = chosen.into_iter().map(|i| plan.atoms[i].0.clone()).collect();
    DiscreteCoupling::uniform(plan.spaces.clone(), tuples)
}
