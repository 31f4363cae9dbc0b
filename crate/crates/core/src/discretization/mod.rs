//! Dyadic discretization of plans.
//!
//! Each factor box is cut into a nested dyadic grid whose cells have
//! diameter below `δ_n / 2`. A plan is discretized by collapsing the mass of
//! every charged product cell onto one representative support tuple; the
//! recovery sequence goes the other way and glues a plan's cell masses to
//! given discrete marginals by products.

mod partition;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::costs::{objective_value, CostSpec, CostValue, Objective};
use crate::error::{Error, Result};
use crate::measures::{bl_discrepancy, tuple_lex_cmp, DiscreteCoupling, DiscreteMeasure, Point};
use crate::scalar::{Scalar, FLOAT_MASS_TOL};

pub use partition::{build_partition, Cell, DeltaSchedule, MarginalGrid, Partition};

/// Dictionary size used by [`convergence_report`].
pub const REPORT_DICTIONARY: usize = 32;

/// How the representative of a product cell is chosen among the support
/// tuples it contains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RepRule {
    #[default]
    Lexicographic,
    /// Closest to the cell centre; ties go to the lexicographically first.
    CentroidNearest,
}

/// The partition built around the marginal supports of `plan`.
pub fn plan_partition<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    level: u32,
    schedule: &DeltaSchedule,
) -> Result<Partition> {
    let supports: Vec<Vec<Point>> = plan
        .marginals()?
        .iter()
        .map(|m| m.points().cloned().collect())
        .collect();
    build_partition(plan.spaces(), &supports, level, schedule)
}

fn charged_cells<W: Scalar>(plan: &DiscreteCoupling<W>, part: &Partition) -> Result<BTreeMap<Vec<usize>, Vec<usize>>> {
    let mut cells: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (a, (t, _)) in plan.atoms().iter().enumerate() {
        let q = part
            .locate_tuple(t)
            .ok_or_else(|| Error::InvalidArgument(format!("plan atom {a} lies outside all cells")))?;
        cells.entry(q).or_default().push(a);
    }
    Ok(cells)
}

/// `α^n`: one atom per charged product cell, at a representative support
/// tuple, carrying the plan's mass of that cell. Atoms come in cell order.
pub fn discretize_plan<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    part: &Partition,
    rule: RepRule,
) -> Result<DiscreteCoupling<W>> {
    let atoms = charged_cells(plan, part)?
        .into_iter()
        .map(|(q, members)| {
            let mass = members
                .iter()
                .fold(W::zero(), |acc, &a| acc + plan.atoms()[a].1.clone());
            let tuple = |a: &usize| &plan.atoms()[*a].0;
            let rep = match rule {
                RepRule::Lexicographic => members.iter().min_by(|a, b| tuple_lex_cmp(tuple(a), tuple(b))),
                RepRule::CentroidNearest => {
                    let dist = |a: &usize| -> f64 {
                        tuple(a)
                            .iter()
                            .enumerate()
                            .map(|(k, p)| {
                                let c = &part.grids()[k].cells()[q[k]];
                                p.0.iter()
                                    .zip(c.lo.iter().zip(&c.hi))
                                    .map(|(x, (lo, hi))| (x - (lo + hi) / 2.0).powi(2))
                                    .sum::<f64>()
                            })
                            .sum()
                    };
                    members.iter().min_by(|a, b| {
                        dist(a)
                            .total_cmp(&dist(b))
                            .then_with(|| tuple_lex_cmp(tuple(a), tuple(b)))
                    })
                }
            }
            .expect("cells are nonempty");
            (tuple(rep).clone(), mass)
        })
        .collect();
    DiscreteCoupling::new(plan.spaces().to_vec(), atoms)
}

/// Mass of each retained cell of factor `k` (0-based) under `m`, in cell
/// order. Cells that `m` does not charge get zero.
pub fn cell_masses<W: Scalar>(m: &DiscreteMeasure<W>, part: &Partition, k: usize) -> Result<Vec<W>> {
    let grid = part.grids().get(k).ok_or(Error::IndexOutOfRange {
        index: k + 1,
        len: part.grids().len(),
    })?;
    let mut masses = vec![W::zero(); grid.cells().len()];
    for (p, w) in m.atoms() {
        let c = grid
            .locate(p)
            .ok_or_else(|| Error::InvalidArgument(format!("point {p} lies outside all cells")))?;
        masses[c] = masses[c].clone() + w.clone();
    }
    Ok(masses)
}

/// Total mass of a cell and the target atoms inside it.
type CellPiece<W> = (W, Vec<(Point, W)>);

/// `β^n = Σ_Q β(Q) ⊗_k μ^{k,n}|_{B_k} / μ^{k,n}(B_k)`: the product gluing of
/// `beta`'s cell masses onto the discrete `targets`.
pub fn recovery_sequence<W: Scalar>(
    beta: &DiscreteCoupling<W>,
    part: &Partition,
    targets: &[DiscreteMeasure<W>],
) -> Result<DiscreteCoupling<W>> {
    if targets.len() != beta.arity() {
        return Err(Error::DimensionMismatch {
            expected: beta.arity(),
            got: targets.len(),
        });
    }
    // per factor and cell: the target atoms inside and their total mass
    let mut pieces: Vec<Vec<CellPiece<W>>> = Vec::with_capacity(targets.len());
    for (k, t) in targets.iter().enumerate() {
        let grid = &part.grids()[k];
        let mut cells = vec![(W::zero(), Vec::new()); grid.cells().len()];
        for (p, w) in t.atoms() {
            let c = grid.locate(p).ok_or_else(|| {
                Error::Precondition(format!("target atom {p} of marginal {} lies outside all cells", k + 1))
            })?;
            cells[c].0 = cells[c].0.clone() + w.clone();
            cells[c].1.push((p.clone(), w.clone()));
        }
        pieces.push(cells);
    }

    let charged = charged_cells(beta, part)?;
    for q in charged.keys() {
        if let Some(k) = (0..q.len()).find(|&k| pieces[k][q[k]].0.tol_is_zero(0.0)) {
            return Err(Error::Precondition(format!(
                "charged cell {} of marginal {} has no target mass",
                q[k],
                k + 1
            )));
        }
    }
    for (k, t) in targets.iter().enumerate() {
        let have = cell_masses(&beta.marginal(k + 1)?, part, k)?;
        let want = cell_masses(t, part, k)?;
        if have.iter().zip(&want).any(|(a, b)| !a.tol_eq(b, FLOAT_MASS_TOL)) {
            return Err(Error::Precondition(format!(
                "cell masses of marginal {} differ from the targets",
                k + 1
            )));
        }
    }

    let mut atoms: Vec<(Vec<Point>, W)> = Vec::new();
    for (q, members) in charged {
        let mass = members
            .iter()
            .fold(W::zero(), |acc, &a| acc + beta.atoms()[a].1.clone());
        let mut partial: Vec<(Vec<Point>, W)> = vec![(Vec::new(), mass)];
        for (k, &c) in q.iter().enumerate() {
            let (total, inside) = &pieces[k][c];
            partial = partial
                .into_iter()
                .flat_map(|(t, w)| {
                    inside.iter().map(move |(p, v)| {
                        let mut t = t.clone();
                        t.push(p.clone());
                        (t, w.clone() * v.clone() / total.clone())
                    })
                })
                .collect();
        }
        atoms.extend(partial);
    }
    DiscreteCoupling::from_unmerged(beta.spaces().to_vec(), atoms)
}

/// One row of [`convergence_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow<W: Scalar> {
    pub level: u32,
    pub delta: f64,
    pub discrepancy: f64,
    pub objective: CostValue<W>,
    /// Bound on `|objective(α^n) - objective(plan)|` from the cost's
    /// continuity modulus; `None` for discontinuous or tabulated costs.
    pub envelope: Option<f64>,
}

/// Discretizes `plan` at each level and tabulates the discrepancy to the
/// plan, the objective of `α^n`, and the continuity envelope.
pub fn convergence_report<W: Scalar>(
    plan: &DiscreteCoupling<W>,
    cost: &CostSpec,
    objective: Objective,
    levels: &[u32],
    schedule: &DeltaSchedule,
) -> Result<Vec<ConvergenceRow<W>>> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument("no levels".into()));
    }
    levels
        .iter()
        .map(|&n| {
            let part = plan_partition(plan, n, schedule)?;
            let alpha = discretize_plan(plan, &part, RepRule::Lexicographic)?;
            Ok(ConvergenceRow {
                level: n,
                delta: part.delta(),
                discrepancy: bl_discrepancy(&alpha, plan, REPORT_DICTIONARY)?,
                objective: objective_value(cost, &alpha, objective)?,
                envelope: cost.continuity_modulus(plan.spaces(), part.max_cell_diameter()),
            })
        })
        .collect()
}

/// CSV with header `n,delta_n,discrepancy,objective,epsilon_envelope`;
/// a missing envelope is written as `NA`.
pub fn report_csv<W: Scalar>(rows: &[ConvergenceRow<W>]) -> String {
    let mut out = String::from("n,delta_n,discrepancy,objective,epsilon_envelope\n");
    for r in rows {
        let env = r.envelope.map_or_else(|| "NA".to_string(), |e| format!("{e:e}"));
        writeln!(
            out,
            "{},{:e},{:e},{:e},{}",
            r.level,
            r.delta,
            r.discrepancy,
            r.objective.to_f64(),
            env
        )
        .expect("writing to a String");
    }
    out
}
