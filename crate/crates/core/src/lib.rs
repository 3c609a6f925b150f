//! Symbolic and numerical verification of the Poincaré and Bargmann algebras
//! built from position, momentum and spin (Foldy canonical form), with
//! momentum-grid and truncated Fock-space realizations.

pub mod algebra;
pub mod fockfield;
pub mod generators;
pub mod numrep;
pub mod tolerances;

pub use algebra::{
    commutator, eval_spin_matrices, normal_form, parse_expr, parse_expr_with, render_expr,
    scalar_derivative, total_time_derivative, AlgebraError, Expr, OperatorExpr, ScalarCoeff,
    SectorMode, Spin, SpinMatrix,
};
pub use numrep::{realize, realize_tree, GridRep, LinearMap, NumError};
pub use fockfield::{FockError, FockField, FockOperator, PhasePoint};
