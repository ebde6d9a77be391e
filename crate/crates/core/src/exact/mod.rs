//! Exact integer and rational arithmetic, integer linear algebra and LP
//! feasibility. Nothing in here touches floating point.

pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod rational;

pub use lattice::{hnf, is_hermite_normal_form, is_saturated, kernel_lattice, snf_invariants};
pub use linalg::{det, rank, row_basis, solve_rational, unimodular_inverse, EchelonBasis};
pub use lp::{lp_feasible, LinearConstraint, LpOutcome, Relation};
pub use matrix::IntegerMatrix;
pub use rational::RationalVector;
