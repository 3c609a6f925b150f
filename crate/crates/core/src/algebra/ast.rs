//! Unsimplified expression trees and their reduction to [`OperatorExpr`].

use std::collections::BTreeMap;

use super::expr::OperatorExpr;
use super::poly::{Rat, Var};
use super::scalar::ScalarCoeff;
use super::AlgebraError;

/// Built-in symbols of the expression language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Q(usize),
    P(usize),
    S(usize),
    Lam,
    /// A commuting indeterminate or algebraic generator.
    Scalar(Var),
}

impl Symbol {
    pub fn lookup(name: &str) -> Option<Symbol> {
        let axis = |rest: &str| match rest {
            "1" => Some(0),
            "2" => Some(1),
            "3" => Some(2),
            _ => None,
        };
        if let Some(rest) = name.strip_prefix('Q') {
            return axis(rest).map(Symbol::Q);
        }
        if let Some(rest) = name.strip_prefix('P') {
            return axis(rest).map(Symbol::P);
        }
        if let Some(rest) = name.strip_prefix('S') {
            return axis(rest).map(Symbol::S);
        }
        Some(match name {
            "Lam" | "Λ" => Symbol::Lam,
            "omega" | "ω" => Symbol::Scalar(Var::Omega),
            "omega2m" | "ω′" => Symbol::Scalar(Var::Omega2m),
            "m" => Symbol::Scalar(Var::Mass),
            "t" => Symbol::Scalar(Var::Time),
            "hbar" | "ħ" => Symbol::Scalar(Var::Hbar),
            "i" => Symbol::Scalar(Var::I),
            "M" => Symbol::Scalar(Var::MassB),
            "E0" => Symbol::Scalar(Var::E0),
            "sqrt2" => Symbol::Scalar(Var::Sqrt2),
            "sqrt3" => Symbol::Scalar(Var::Sqrt3),
            _ => return None,
        })
    }

    pub fn to_operator(self) -> OperatorExpr {
        match self {
            Symbol::Q(a) => OperatorExpr::q(a),
            Symbol::P(a) => OperatorExpr::p(a),
            Symbol::S(a) => OperatorExpr::s(a),
            Symbol::Lam => OperatorExpr::lam(),
            Symbol::Scalar(v) => OperatorExpr::var(v),
        }
    }
}

/// Named expressions the parser may refer to (e.g. a generator set).
pub type Bindings = BTreeMap<String, OperatorExpr>;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    Sym(Symbol),
    /// A bound name together with its value.
    Bound(String, OperatorExpr),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division; the divisor must reduce to `a + bΛ` with `a`, `b` scalar.
    Div(Box<Expr>, Box<Expr>),
    /// Integer power; negative exponents need an invertible base as in `Div`.
    Pow(Box<Expr>, i64),
    Comm(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn sym(s: Symbol) -> Expr {
        Expr::Sym(s)
    }

    pub fn num(n: i64) -> Expr {
        Expr::Num(Rat::from_integer(n.into()))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: i64) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn comm(a: Expr, b: Expr) -> Expr {
        Expr::Comm(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }
}

/// Reduces a tree to its unique normal form.
pub fn normal_form(e: &Expr) -> Result<OperatorExpr, AlgebraError> {
    Ok(match e {
        Expr::Num(r) => OperatorExpr::scalar(ScalarCoeff::from_rat(r.clone())),
        Expr::Sym(s) => s.to_operator(),
        Expr::Bound(_, v) => v.clone(),
        Expr::Neg(a) => normal_form(a)?.neg(),
        Expr::Add(a, b) => normal_form(a)?.add(&normal_form(b)?),
        Expr::Sub(a, b) => normal_form(a)?.sub(&normal_form(b)?),
        Expr::Mul(a, b) => normal_form(a)?.mul(&normal_form(b)?),
        Expr::Div(a, b) => normal_form(a)?.mul(&normal_form(b)?.inverse_central()?),
        Expr::Pow(a, n) => {
            let base = normal_form(a)?;
            if *n >= 0 {
                base.pow(*n as u32)
            } else {
                base.inverse_central()?.pow(n.unsigned_abs() as u32)
            }
        }
        Expr::Comm(a, b) => normal_form(a)?.commutator(&normal_form(b)?),
    })
}
