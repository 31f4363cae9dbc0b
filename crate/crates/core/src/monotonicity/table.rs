use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::measures::{tuple_key, DiscreteCoupling, Point, PointKey};
use crate::scalar::{format_rational, Rational};

/// A finitely supported measure with positive integer weights.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerCoupling {
    atoms: Vec<(Vec<Point>, u64)>,
}

impl IntegerCoupling {
    pub fn new(atoms: Vec<(Vec<Point>, u64)>) -> Result<Self> {
        let arity = atoms.first().map_or(0, |(t, _)| t.len());
        if atoms.is_empty() || arity < 2 {
            return Err(Error::InvalidMeasure("need at least one N-tuple with N >= 2".into()));
        }
        for (t, m) in &atoms {
            if t.len() != arity {
                return Err(Error::DimensionMismatch {
                    expected: arity,
                    got: t.len(),
                });
            }
            if *m == 0 {
                return Err(Error::NonIntegerWeight("0".into()));
            }
        }
        Ok(IntegerCoupling { atoms })
    }

    /// Accepts rational weights that happen to be positive integers.
    pub fn try_from_weights(atoms: Vec<(Vec<Point>, Rational)>) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(t, w)| {
                let m = w
                    .is_integer()
                    .then(|| w.to_integer().to_u64())
                    .flatten()
                    .filter(|m| *m > 0)
                    .ok_or_else(|| Error::NonIntegerWeight(format_rational(&w)))?;
                Ok((t, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    /// Multiplies the weights of both couplings by the least common
    /// denominator, giving integer measures of equal total mass.
    pub fn scale_pair(a: &DiscreteCoupling<Rational>, b: &DiscreteCoupling<Rational>) -> Result<(Self, Self)> {
        let lcm = a
            .atoms()
            .iter()
            .chain(b.atoms())
            .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
        let scale = |c: &DiscreteCoupling<Rational>| {
            Self::try_from_weights(
                c.atoms()
                    .iter()
                    .map(|(t, w)| (t.clone(), w * Rational::from_integer(lcm.clone())))
                    .collect(),
            )
        };
        Ok((scale(a)?, scale(b)?))
    }

    pub fn atoms(&self) -> &[(Vec<Point>, u64)] {
        &self.atoms
    }

    pub fn arity(&self) -> usize {
        self.atoms[0].0.len()
    }

    pub fn total(&self) -> u64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }
}

/// Every atom of an integer coupling repeated by its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerTable {
    pub rows: Vec<Vec<Point>>,
    /// Index of the originating atom for each row.
    pub groups: Vec<usize>,
}

impl IntegerTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn column_keys(&self, k: usize) -> Vec<PointKey> {
        self.rows.iter().map(|r| r[k].key()).collect()
    }

    /// Rows as sorted keys, for multiset comparison.
    pub fn row_multiset(&self) -> Vec<Vec<PointKey>> {
        let mut keys: Vec<_> = self.rows.iter().map(|r| tuple_key(r)).collect();
        keys.sort();
        keys
    }
}

pub fn expand_to_table(m: &IntegerCoupling) -> IntegerTable {
    let mut rows = Vec::with_capacity(m.total() as usize);
    let mut groups = Vec::with_capacity(rows.capacity());
    for (g, (t, mult)) in m.atoms.iter().enumerate() {
        for _ in 0..*mult {
            rows.push(t.clone());
            groups.push(g);
        }
    }
    IntegerTable { rows, groups }
}

/// Permutations `σ², …, σᴺ` (0-based) such that the rows
/// `(A[i]¹, A[σ²(i)]², …, A[σᴺ(i)]ᴺ)` are a reordering of `B`.
///
/// `None` when some column multiset of `A` differs from that of `B`.
pub fn find_permutations(a: &IntegerTable, b: &IntegerTable) -> Result<Option<Vec<Vec<usize>>>> {
    if a.len() != b.len() {
        return Err(Error::RowCountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let arity = a.rows.first().map_or(0, Vec::len);
    if b.rows.first().map_or(0, Vec::len) != arity {
        return Ok(None);
    }
    for k in 0..arity {
        let mut x = a.column_keys(k);
        let mut y = b.column_keys(k);
        x.sort();
        y.sort();
        if x != y {
            return Ok(None);
        }
    }

    // reorder B so that its first column agrees with A row by row
    let mut by_first: BTreeMap<PointKey, VecDeque<usize>> = BTreeMap::new();
    for (j, r) in b.rows.iter().enumerate() {
        by_first.entry(r[0].key()).or_default().push_back(j);
    }
    let order: Vec<usize> = a
        .rows
        .iter()
        .map(|r| {
            by_first
                .get_mut(&r[0].key())
                .and_then(VecDeque::pop_front)
                .expect("first columns agree as multisets")
        })
        .collect();

    let sigmas = (1..arity)
        .map(|k| {
            let mut pool: BTreeMap<PointKey, VecDeque<usize>> = BTreeMap::new();
            for (i, r) in a.rows.iter().enumerate() {
                pool.entry(r[k].key()).or_default().push_back(i);
            }
            order
                .iter()
                .map(|&j| {
                    pool.get_mut(&b.rows[j][k].key())
                        .and_then(VecDeque::pop_front)
                        .expect("columns agree as multisets")
                })
                .collect()
        })
        .collect();
    Ok(Some(sigmas))
}

/// The table with rows `(A[i]¹, A[σ²(i)]², …)`.
pub fn apply_permutations(a: &IntegerTable, sigmas: &[Vec<usize>]) -> IntegerTable {
    let rows = (0..a.len())
        .map(|i| {
            let mut r = vec![a.rows[i][0].clone()];
            for (f, s) in sigmas.iter().enumerate() {
                r.push(a.rows[s[i]][f + 1].clone());
            }
            r
        })
        .collect();
    IntegerTable {
        rows,
        groups: (0..a.len()).collect(),
    }
}
