//! Edmonds–Karp max-flow for the two-marginal threshold subproblem.
//!
//! A coupling supported on an allowed set of cells exists iff the bipartite
//! network `source -> i -> j -> sink` (capacities `μ_i`, `min(μ_i, ν_j)`,
//! `ν_j`) saturates every source and sink edge.

use std::collections::VecDeque;

use crate::scalar::Scalar;

struct Edge<W> {
    to: usize,
    cap: W,
    rev: usize,
}

struct Network<W> {
    adj: Vec<Vec<Edge<W>>>,
}

impl<W: Scalar> Network<W> {
    fn new(n: usize) -> Self {
        Network {
            adj: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    /// Returns `(from, index)` of the forward edge.
    fn add_edge(&mut self, from: usize, to: usize, cap: W) -> (usize, usize) {
        let fwd = self.adj[from].len();
        let back = self.adj[to].len();
        self.adj[from].push(Edge { to, cap, rev: back });
        self.adj[to].push(Edge {
            to: from,
            cap: W::zero(),
            rev: fwd,
        });
        (from, fwd)
    }

    fn max_flow(&mut self, s: usize, t: usize, tol: f64) -> W {
        let mut total = W::zero();
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for (k, e) in self.adj[u].iter().enumerate() {
                    if !seen[e.to] && e.cap.tol_is_positive(tol) {
                        seen[e.to] = true;
                        prev[e.to] = Some((u, k));
                        queue.push_back(e.to);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut bottleneck: Option<W> = None;
            let mut v = t;
            while let Some((u, k)) = prev[v] {
                let c = self.adj[u][k].cap.clone();
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= c => b,
                    _ => c,
                });
                v = u;
            }
            let b = bottleneck.expect("path has at least one edge");
            let mut v = t;
            while let Some((u, k)) = prev[v] {
                let rev = self.adj[u][k].rev;
                self.adj[u][k].cap = self.adj[u][k].cap.clone() - b.clone();
                self.adj[v][rev].cap = self.adj[v][rev].cap.clone() + b.clone();
                v = u;
            }
            total = total + b;
        }
    }
}

/// Tries to couple `mu` and `nu` using only the cells `(i, j)` in `allowed`.
/// Returns the cell masses of a witness plan on success.
pub(crate) fn couple_on_cells<W: Scalar>(
    mu: &[W],
    nu: &[W],
    allowed: &[(usize, usize)],
    tol: f64,
) -> Option<Vec<((usize, usize), W)>> {
    let (m, n) = (mu.len(), nu.len());
    let source = m + n;
    let sink = source + 1;
    let mut net = Network::new(m + n + 2);
    for (i, w) in mu.iter().enumerate() {
        net.add_edge(source, i, w.clone());
    }
    for (j, w) in nu.iter().enumerate() {
        net.add_edge(m + j, sink, w.clone());
    }
    let cells: Vec<_> = allowed
        .iter()
        .map(|&(i, j)| {
            let cap = if mu[i] <= nu[j] { mu[i].clone() } else { nu[j].clone() };
            ((i, j), net.add_edge(i, m + j, cap.clone()), cap)
        })
        .collect();
    let flow = net.max_flow(source, sink, tol);
    let total = mu.iter().fold(W::zero(), |a, w| a + w.clone());
    if !flow.tol_eq(&total, tol) {
        return None;
    }
    Some(
        cells
            .into_iter()
            .filter_map(|(cell, (u, k), cap)| {
                let used = cap - net.adj[u][k].cap.clone();
                used.tol_is_positive(tol).then_some((cell, used))
            })
            .collect(),
    )
}
