//! Discrete multi-marginal optimal transport with integral and sup costs.
//!
//! The crate works with finitely supported measures on boxes and provides:
//!
//! - [`measures`]: discrete measures and couplings, marginals, submeasure
//!   sampling and a test-function discrepancy for weak convergence.
//! - [`costs`]: cost families and the objectives `C[γ] = ∫ c dγ` and
//!   `C∞[γ] = max_{supp γ} c`.
//! - [`monotonicity`]: exhaustive c-cyclical (CM) and infinitely c-cyclical
//!   (ICM) monotonicity checks with re-checkable certificates, the
//!   multiplicity table / permutation machinery, rational re-weighting of
//!   plan pairs, and the finite-optimality audit.
//! - [`solvers`]: exact LP and bottleneck solvers plus a brute-force oracle.
//! - [`discretization`]: nested dyadic partitions, cell-wise discretisation
//!   of a plan and the product-gluing recovery sequence.
//! - [`experiments`]: Γ-convergence runs, the optimality pipeline and the
//!   irrational-rotation counterexample.
//!
//! Weights are exact rationals ([`Rational`]) or `f64`, selected by type.
//!
//! ```
//! use mmot::{CostSpec, DiscreteMeasure, FactorSpace, MotInstance, Objective, Point, Rational};
//! use mmot::solvers::{solve_integral_mot, SolverGuard};
//!
//! let line = FactorSpace::interval(0.0, 2.0).unwrap();
//! let mu = DiscreteMeasure::<Rational>::uniform(line.clone(), vec![Point::scalar(0.0), Point::scalar(1.0)]).unwrap();
//! let nu = DiscreteMeasure::<Rational>::uniform(line, vec![Point::scalar(1.0), Point::scalar(2.0)]).unwrap();
//! let inst = MotInstance::new(vec![mu, nu], CostSpec::power_distance(2.0).unwrap(), Objective::Sum).unwrap();
//! let sol = solve_integral_mot(&inst, &SolverGuard::default()).unwrap();
//! assert_eq!(sol.value.to_string(), "1");
//! ```

pub mod cli;
pub mod costs;
pub mod discretization;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod monotonicity;
pub mod scalar;
pub mod solvers;

pub use costs::{eval_cost, integral_cost, objective_value, sup_cost, CostSpec, CostValue, Objective};
pub use error::{Error, Result};
pub use measures::{bl_discrepancy, sample_submeasure, DiscreteCoupling, DiscreteMeasure, FactorSpace, Point};
pub use scalar::{Rational, Scalar, WeightMode};
pub use solvers::{MotInstance, Solution};
