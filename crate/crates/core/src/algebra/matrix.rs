//! Substitution of concrete spin matrices for `S`.

use std::fmt;

use super::expr::{OperatorExpr, TermKey};
use super::scalar::ScalarCoeff;
use super::spin::Spin;

/// Square matrix whose entries are spin-free expressions.
#[derive(Clone, PartialEq, Eq)]
pub struct SpinMatrix {
    dim: usize,
    entries: Vec<OperatorExpr>,
}

type ScalarMatrix = Vec<Vec<ScalarCoeff>>;

fn scalar_matmul(a: &ScalarMatrix, b: &ScalarMatrix) -> ScalarMatrix {
    let d = a.len();
    let mut out = vec![vec![ScalarCoeff::zero(); d]; d];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            for k in 0..d {
                if !a[r][k].is_zero() && !b[k][c].is_zero() {
                    *cell = cell.add(&a[r][k].mul(&b[k][c]));
                }
            }
        }
    }
    out
}

fn scalar_identity(d: usize) -> ScalarMatrix {
    (0..d)
        .map(|r| (0..d).map(|c| if r == c { ScalarCoeff::one() } else { ScalarCoeff::zero() }).collect())
        .collect()
}

impl SpinMatrix {
    pub fn zeros(dim: usize) -> Self {
        SpinMatrix {
            dim,
            entries: vec![OperatorExpr::zero(); dim * dim],
        }
    }

    /// `e · 1`
    pub fn diagonal(dim: usize, e: &OperatorExpr) -> Self {
        let mut m = SpinMatrix::zeros(dim);
        for r in 0..dim {
            m.entries[r * dim + r] = e.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &OperatorExpr {
        &self.entries[r * self.dim + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(OperatorExpr::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        SpinMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        SpinMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// Matrix product; entries multiply in the operator algebra.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = SpinMatrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = OperatorExpr::zero();
                for k in 0..d {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.entries[r * d + c] = acc;
            }
        }
        out
    }
}

impl fmt::Debug for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Replaces `S_i` by the `(2s+1)`-dimensional spin matrices.
pub fn eval_spin_matrices(e: &OperatorExpr, spin: Spin) -> SpinMatrix {
    let d = spin.dim();
    let mats = spin.exact_matrices();
    let mut out = SpinMatrix::zeros(d);
    for (key, c) in e.terms() {
        let mut m = scalar_identity(d);
        for (axis, mat) in mats.iter().enumerate() {
            for _ in 0..key.s[axis] {
                m = scalar_matmul(&m, mat);
            }
        }
        let base = OperatorExpr::term(c.clone(), TermKey { s: [0; 3], ..*key });
        for (r, row) in m.iter().enumerate() {
            for (col, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    let cell = &mut out.entries[r * d + col];
                    *cell = cell.add(&base.scale(x));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_half() {
        let m = eval_spin_matrices(&OperatorExpr::s(2), Spin::HALF);
        let h = OperatorExpr::hbar().half();
        assert_eq!(*m.get(0, 0), h);
        assert_eq!(*m.get(1, 1), h.neg());
        assert!(m.get(0, 1).is_zero());
    }

    #[test]
    fn s_squared_spin_one() {
        let s_sq = (0..3).fold(OperatorExpr::zero(), |acc, a| acc.add(&OperatorExpr::s(a).pow(2)));
        let m = eval_spin_matrices(&s_sq, Spin::ONE);
        let want = SpinMatrix::diagonal(3, &OperatorExpr::hbar().pow(2).scale_int(2));
        assert_eq!(m, want);
    }

    #[test]
    fn commutation_survives_all_spins() {
        for twice in 0..=4 {
            let spin = Spin::from_twice(twice).unwrap();
            let rel = OperatorExpr::s(0)
                .mul(&OperatorExpr::s(1))
                .sub(&OperatorExpr::s(1).mul(&OperatorExpr::s(0)));
            let lhs = eval_spin_matrices(&OperatorExpr::s(0), spin)
                .mul(&eval_spin_matrices(&OperatorExpr::s(1), spin))
                .sub(&eval_spin_matrices(&OperatorExpr::s(1), spin).mul(&eval_spin_matrices(&OperatorExpr::s(0), spin)));
            assert_eq!(lhs, eval_spin_matrices(&rel, spin));
        }
    }
}
