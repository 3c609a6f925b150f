//! Generator sets built from `Q`, `P`, `S`, `Λ` and the checks run on them.

mod emrelation;
mod identities;
mod lemmas;
pub mod report;
mod table;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, Bindings, OperatorExpr, ScalarCoeff, SectorMode, Var};

pub use emrelation::energy_momentum_constraint_check;
pub use identities::{boost_matrix_identities, casimir_elements, casimirs, pauli_lubanski};
pub use lemmas::lemma_suite;
pub use report::{ReportEntry, VerificationReport};
pub use table::{check_table, check_table_with, table_relations, TableKind, TableOptions, TableRelation};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("generator `{0}` is missing from the set")]
    Missing(String),
    #[error("candidate Hamiltonian rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Vec3 = [OperatorExpr; 3];

pub fn vec3(f: impl Fn(usize) -> OperatorExpr) -> Vec3 {
    [f(0), f(1), f(2)]
}

/// `(a × b)_i = ε_ijk a_j b_k`, factors kept in the given order.
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    vec3(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        a[j].mul(&b[k]).sub(&a[k].mul(&b[j]))
    })
}

/// `a · b = Σ a_i b_i`, factors kept in the given order.
pub fn dot(a: &Vec3, b: &Vec3) -> OperatorExpr {
    (0..3).fold(OperatorExpr::zero(), |acc, i| acc.add(&a[i].mul(&b[i])))
}

pub fn vec_add(a: &Vec3, b: &Vec3) -> Vec3 {
    vec3(|i| a[i].add(&b[i]))
}

pub fn vec_sub(a: &Vec3, b: &Vec3) -> Vec3 {
    vec3(|i| a[i].sub(&b[i]))
}

/// Left multiplication of each component.
pub fn vec_lmul(c: &OperatorExpr, a: &Vec3) -> Vec3 {
    vec3(|i| c.mul(&a[i]))
}

/// Right multiplication of each component.
pub fn vec_rmul(a: &Vec3, c: &OperatorExpr) -> Vec3 {
    vec3(|i| a[i].mul(c))
}

pub fn q_vec() -> Vec3 {
    vec3(OperatorExpr::q)
}

pub fn p_vec() -> Vec3 {
    vec3(OperatorExpr::p)
}

pub fn s_vec() -> Vec3 {
    vec3(OperatorExpr::s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Relativistic,
    Galilean,
}

/// Named generators; every value is in normal form.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: SetKind,
    pub sector: SectorMode,
    map: BTreeMap<String, OperatorExpr>,
}

impl GeneratorSet {
    pub fn new(kind: SetKind, sector: SectorMode) -> Self {
        GeneratorSet {
            kind,
            sector,
            map: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, e: OperatorExpr) {
        self.map.insert(name.into(), e);
    }

    pub fn insert_vec(&mut self, prefix: &str, v: Vec3) {
        for (i, e) in v.into_iter().enumerate() {
            self.insert(format!("{prefix}{}", i + 1), e);
        }
    }

    pub fn get(&self, name: &str) -> Result<&OperatorExpr, GeneratorError> {
        self.map.get(name).ok_or_else(|| GeneratorError::Missing(name.to_string()))
    }

    pub fn vector(&self, prefix: &str) -> Result<Vec3, GeneratorError> {
        Ok([
            self.get(&format!("{prefix}1"))?.clone(),
            self.get(&format!("{prefix}2"))?.clone(),
            self.get(&format!("{prefix}3"))?.clone(),
        ])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &OperatorExpr)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// The set as parser bindings, so text like `[J1, K2]` resolves.
    pub fn bindings(&self) -> Bindings {
        self.map.clone()
    }

    /// Applies a map to every generator.
    pub fn map(&self, f: impl Fn(&OperatorExpr) -> OperatorExpr) -> Self {
        GeneratorSet {
            kind: self.kind,
            sector: self.sector,
            map: self.map.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    /// Sets `S = 0` in every generator.
    pub fn spinless(&self) -> Self {
        self.map(OperatorExpr::without_spin)
    }
}

/// `½(Q_i H + H Q_i)` for each component.
pub fn q_dot_h(h: &OperatorExpr) -> Vec3 {
    vec3(|i| OperatorExpr::q(i).sym_product(h))
}

/// Foldy generators with an arbitrary translation-invariant `H` and spin
/// part `N`: `J = Q×P + S`, `K = tP − Q·H + N`, plus the derived `L`, `M`,
/// `V`, `W0`, `W`.
pub fn foldy_like(h: &OperatorExpr, n: &Vec3, sector: SectorMode) -> GeneratorSet {
    let (q, p, s) = (q_vec(), p_vec(), s_vec());
    let l = cross(&q, &p);
    let j = vec_add(&l, &s);
    let t = OperatorExpr::time();
    let m = vec_sub(&vec_lmul(&t, &p), &q_dot_h(h));
    let k = vec_add(&m, n);
    let v = vec3(|i| q[i].bracket(h));
    let w0 = dot(&j, &p);
    let w = vec_sub(&vec_lmul(h, &j), &cross(&p, &k));

    let mut g = GeneratorSet::new(SetKind::Relativistic, SectorMode::Full);
    g.insert("H", h.clone());
    g.insert("Lam", OperatorExpr::lam());
    g.insert("W0", w0);
    for (name, val) in [("P", p), ("Q", q), ("S", s), ("L", l), ("J", j), ("M", m), ("N", n.clone()), ("K", k), ("V", v), ("W", w)] {
        g.insert_vec(name, val);
    }
    if sector == SectorMode::Full {
        g
    } else {
        let mut out = g.map(|e| e.sector(sector));
        out.sector = sector;
        out
    }
}

/// `N = Λ S×P/(ω + m)`
pub fn foldy_n() -> Vec3 {
    let inv = ScalarCoeff::omega()
        .add(&ScalarCoeff::mass())
        .inv()
        .expect("ω + m is invertible");
    let lam = OperatorExpr::lam().scale(&inv);
    vec_lmul(&lam, &cross(&s_vec(), &p_vec()))
}

/// `H = Λω`
pub fn foldy_h() -> OperatorExpr {
    OperatorExpr::lam().mul(&OperatorExpr::omega())
}

/// The Foldy realization of the Poincaré generators.
pub fn foldy_generators(sector: SectorMode) -> GeneratorSet {
    foldy_like(&foldy_h(), &foldy_n(), sector)
}

/// The Bargmann generators `H = P²/2M + E0`, `J = Q×P + S`, `C = tP − MQ`,
/// with central `M` and `E0`.
pub fn bargmann_generators() -> GeneratorSet {
    let (q, p, s) = (q_vec(), p_vec(), s_vec());
    let mass = OperatorExpr::var(Var::MassB);
    let inv_2m = ScalarCoeff::var(Var::MassB).scale_rat(&crate::algebra::poly::rat(2)).inv().expect("2M is invertible");
    let h = dot(&p, &p).scale(&inv_2m).add(&OperatorExpr::var(Var::E0));
    let t = OperatorExpr::time();
    let c = vec_sub(&vec_lmul(&t, &p), &vec_lmul(&mass, &q));
    let l = cross(&q, &p);
    let j = vec_add(&l, &s);
    let mut g = GeneratorSet::new(SetKind::Galilean, SectorMode::Full);
    g.insert("H", h);
    g.insert("M", mass);
    g.insert("E0", OperatorExpr::var(Var::E0));
    for (name, val) in [("P", p), ("Q", q), ("S", s), ("L", l), ("J", j), ("C", c)] {
        g.insert_vec(name, val);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expr_with;

    #[test]
    fn foldy_shapes() {
        let g = foldy_generators(SectorMode::Full);
        assert_eq!(g.get("H").unwrap().to_string(), "omega*Lam");
        let n = g.vector("N").unwrap();
        assert!(dot(&n, &p_vec()).is_zero());
        let spinless = g.spinless();
        for i in 0..3 {
            let k = &spinless.vector("K").unwrap()[i];
            let m = &spinless.vector("M").unwrap()[i];
            assert_eq!(k, m);
        }
    }

    #[test]
    fn bracket_sugar_with_bindings() {
        let g = foldy_generators(SectorMode::Full);
        let e = parse_expr_with("[J1, K2]", &g.bindings()).unwrap();
        let k3 = g.get("K3").unwrap().scale(&ScalarCoeff::i_hbar());
        assert_eq!(e, k3);
    }

    #[test]
    fn bargmann_shapes() {
        let g = bargmann_generators();
        let c1 = g.get("C1").unwrap();
        assert_eq!(OperatorExpr::q(0).commutator(c1), OperatorExpr::i_hbar().mul(&OperatorExpr::time()));
        let r = c1.commutator(g.get("H").unwrap());
        assert_eq!(r, OperatorExpr::p(0).mul(&OperatorExpr::i_hbar()).neg());
    }
}
