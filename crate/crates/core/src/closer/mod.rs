//! The summation engine: target bases, sampled solving, degree bounds and
//! identity certification.

pub mod basis;
pub mod bounds;
pub mod monomial;
pub mod problem;
pub mod solve;

pub use basis::{build_basis_fundamental, build_basis_shifted, BasisKind, BasisSpec};
pub use bounds::{
    certify_identity, certify_identity_window, closed_form_degree_bound, degree_bound, Certificate, Verdict,
};
pub use monomial::{ClosedForm, FactorRef, TargetMonomial, Term};
pub use problem::{SumProblem, TermFactor};
pub use solve::{basis_for, shifted_basis, solve, solve_problem, SolutionSpace, SolveOptions};
