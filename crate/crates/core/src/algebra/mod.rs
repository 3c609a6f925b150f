//! Exact symbolic calculus for the position–momentum–spin algebra.

pub mod ast;
pub mod expr;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod spin;

use thiserror::Error;

pub use ast::{normal_form, Bindings, Expr, Symbol};
pub use expr::{inv_i_hbar, OperatorExpr, SectorMode, TermKey};
pub use matrix::{eval_spin_matrices, SpinMatrix};
pub use parse::{parse_expr, parse_expr_with, parse_tree, render_expr};
pub use poly::{Point, Poly, Rat, Var};
pub use scalar::{Atom, ScalarCoeff};
pub use spin::{levi_civita, Spin};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("`{0}` is not invertible: its norm does not factor over the known denominators")]
    NotInvertible(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("unsupported spin {0}: the matrix backend covers s = 0, 1/2, 1, 3/2, 2")]
    UnsupportedSpin(String),
}

/// `∂r/∂P_axis` with `∂ω/∂P_i = P_i/ω`.
pub fn scalar_derivative(r: &ScalarCoeff, axis: usize) -> ScalarCoeff {
    r.partial_momentum(axis)
}

/// `nf(ab − ba)`
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    a.commutator(b)
}

/// `nf(∂e/∂t + (1/iħ)[e, H])`
pub fn total_time_derivative(e: &OperatorExpr, hamiltonian: &OperatorExpr) -> OperatorExpr {
    e.total_time_derivative(hamiltonian)
}
