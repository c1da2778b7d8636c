//! Closed-form mathematics: constraint residuals, the exact solution
//! families, and the ansatz with its coefficient-matching checks.

mod constraints;
mod solution;
mod solve;

pub use constraints::{
    check_constraints, eta_form_constraint_residual, eta_form_constraint_scale, cross_constraint_residual,
    excited_constraint_residual_same, ground_constraint_residual, ConstraintReport,
};
pub use solution::{
    excited_coefficients, excited_coefficients_unchecked, kappa_and_energy, AnsatzSolution,
};
pub use solve::{solve_cross_l, solve_cross_l_all, solve_same_qn};
