//! Cyclical monotonicity and its finite consequences.
//!
//! A support is c-cyclically monotone (CM) when no reassignment of `k` of
//! its tuples by permutations of the non-first coordinates lowers the summed
//! cost, and infinitely c-cyclically monotone (ICM) when none lowers the
//! maximum. [`check_cm`] and [`check_icm`] search exhaustively up to a cycle
//! length and return a re-checkable [`Certificate`] for the first violation.
//!
//! The remaining pieces support the finite-optimality argument: integer
//! multiplicity tables and the permutations relating two of them,
//! rational re-weighting of a pair of plans with equal marginals, and a
//! randomized audit that re-solves sampled submeasures.

mod audit;
mod rationalize;
mod search;
mod table;

pub use audit::{check_finite_optimality, AuditReport, AuditTrial};
pub use rationalize::{marginal_equality_system, rationalize_pair};
pub use search::{check_cm, check_icm, find_violation, search_size, Certificate, SearchGuard};
pub use table::{apply_permutations, expand_to_table, find_permutations, IntegerCoupling, IntegerTable};
