//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0`. Generic over the weight
//! arithmetic: exact with rationals, tolerance-based with `f64`.

use crate::scalar::Scalar;

/// Tolerance below which float tableau entries are flushed to zero.
const FLUSH: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome<W> {
    Optimal { x: Vec<W>, value: W },
    Infeasible,
    Unbounded,
}

/// A linear program in equality form with sparse rows.
#[derive(Clone, Debug)]
pub(crate) struct StandardForm<W> {
    pub n_vars: usize,
    pub rows: Vec<Vec<(usize, W)>>,
    pub rhs: Vec<W>,
}

struct Tableau<W> {
    /// `m` constraint rows followed by the objective row. The last column
    /// holds the right-hand side (minus the objective value in the last row).
    t: Vec<Vec<W>>,
    basis: Vec<usize>,
    n_vars: usize,
    tol: f64,
}

impl<W: Scalar> Tableau<W> {
    fn width(&self) -> usize {
        self.t[0].len()
    }

    fn rhs_col(&self) -> usize {
        self.width() - 1
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let inv = W::one() / self.t[r][e].clone();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if p.is_zero() {
                    continue;
                }
                *v = v.clone() - f.clone() * p.clone();
                if v.tol_is_zero(FLUSH) {
                    *v = W::zero();
                }
            }
            row[e] = W::zero();
        }
        self.t[r] = pivot_row;
        self.t[r][e] = W::one();
        self.basis[r] = e;
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic
    /// variable among tied ratios.
    fn run(&mut self, allowed: usize) -> bool {
        let obj = self.m();
        let rhs = self.rhs_col();
        loop {
            let Some(e) = (0..allowed).find(|&j| self.t[obj][j].tol_lt(&W::zero(), self.tol)) else {
                return true;
            };
            let mut best: Option<(usize, W)> = None;
            for i in 0..obj {
                let a = &self.t[i][e];
                if !a.tol_is_positive(self.tol) {
                    continue;
                }
                let ratio = self.t[i][rhs].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio.tol_lt(&br, self.tol)
                            || (ratio.tol_eq(&br, self.tol) && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        self.t.remove(r);
        self.basis.remove(r);
    }
}

/// Minimises `cost · x` over the polytope, or only tests feasibility when
/// `cost` is `None` (the returned value is then zero).
pub(crate) fn solve<W: Scalar>(lp: &StandardForm<W>, cost: Option<&[W]>, tol: f64) -> LpOutcome<W> {
    let n = lp.n_vars;
    let m = lp.rows.len();
    let width = n + m + 1;
    let mut t = vec![vec![W::zero(); width]; m + 1];
    for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
        let flip = b.tol_lt(&W::zero(), 0.0);
        for (j, a) in row {
            t[i][*j] = if flip { -a.clone() } else { a.clone() };
        }
        t[i][n + i] = W::one();
        t[i][width - 1] = if flip { -b.clone() } else { b.clone() };
    }
    // phase one: minimise the sum of artificials
    for i in 0..m {
        for j in (0..n).chain(std::iter::once(width - 1)) {
            if !t[i][j].is_zero() {
                t[m][j] = t[m][j].clone() - t[i][j].clone();
            }
        }
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        n_vars: n,
        tol,
    };
    tab.run(n);
    let infeasibility = -tab.t[tab.m()][tab.rhs_col()].clone();
    if infeasibility.tol_is_positive(tol) {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis; rows that cannot pivot are redundant
    let mut r = 0;
    while r < tab.m() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.t[r][j].tol_is_zero(tol)) {
                Some(j) => {
                    tab.pivot(r, j);
                    r += 1;
                }
                None => tab.remove_row(r),
            }
        } else {
            r += 1;
        }
    }

    let obj = tab.m();
    let rhs = tab.rhs_col();
    if let Some(c) = cost {
        let mut row = vec![W::zero(); tab.width()];
        row[..n].clone_from_slice(c);
        for i in 0..obj {
            let cb = c[tab.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (v, a) in row.iter_mut().zip(&tab.t[i]) {
                if !a.is_zero() {
                    *v = v.clone() - cb.clone() * a.clone();
                }
            }
        }
        for i in 0..obj {
            row[tab.basis[i]] = W::zero();
        }
        tab.t[obj] = row;
        if !tab.run(n) {
            return LpOutcome::Unbounded;
        }
    }

    let mut x = vec![W::zero(); tab.n_vars];
    for i in 0..obj {
        let v = tab.t[i][rhs].clone();
        x[tab.basis[i]] = if v.tol_lt(&W::zero(), 0.0) { W::zero() } else { v };
    }
    let value = match cost {
        Some(c) => x
            .iter()
            .zip(c)
            .fold(W::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone()),
        None => W::zero(),
    };
    LpOutcome::Optimal { x, value }
}
