//! Normal-ordered noncommutative polynomials in `Q`, `S` and `Λ`.
//!
//! Each term is `c · Q1^a Q2^b Q3^c · S1^d S2^e S3^f · Λ^l` with the
//! coefficient `c` (a function of `P` and the central symbols) on the left,
//! spin in PBW order and `l ∈ {0, 1}`. The zero expression is the empty map.

use std::collections::BTreeMap;
use std::fmt;

use super::poly::{rat, Poly, Var};
use super::scalar::ScalarCoeff;
use super::spin::{smono_product, SMono, Spin};
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TermKey {
    pub q: [u8; 3],
    pub s: SMono,
    pub lam: bool,
}

impl TermKey {
    pub const UNIT: TermKey = TermKey {
        q: [0; 3],
        s: [0; 3],
        lam: false,
    };

    pub fn is_unit(&self) -> bool {
        *self == TermKey::UNIT
    }

    fn render_ops(&self) -> String {
        let mut parts = Vec::new();
        for (prefix, exps) in [("Q", &self.q), ("S", &self.s)] {
            for (axis, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{prefix}{}", axis + 1)),
                    _ => parts.push(format!("{prefix}{}^{e}", axis + 1)),
                }
            }
        }
        if self.lam {
            parts.push("Lam".to_string());
        }
        parts.join("*")
    }
}

/// Which value `Λ` takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorMode {
    /// `Λ` stays symbolic.
    Full,
    Positive,
    Negative,
}

impl SectorMode {
    pub fn sign(self) -> Option<i64> {
        match self {
            SectorMode::Full => None,
            SectorMode::Positive => Some(1),
            SectorMode::Negative => Some(-1),
        }
    }
}

impl fmt::Display for SectorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectorMode::Full => "full",
            SectorMode::Positive => "positive",
            SectorMode::Negative => "negative",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<TermKey, ScalarCoeff>,
}

fn add_into(map: &mut BTreeMap<TermKey, ScalarCoeff>, key: TermKey, c: ScalarCoeff) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(old) => {
            let sum = old.add(&c);
            if sum.is_zero() {
                map.remove(&key);
            } else {
                *old = sum;
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

fn binomial(n: u8, k: u8) -> i64 {
    let mut r = 1i64;
    for j in 0..k as i64 {
        r = r * (n as i64 - j) / (j + 1);
    }
    r
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr::default()
    }

    pub fn one() -> Self {
        OperatorExpr::scalar(ScalarCoeff::one())
    }

    pub fn scalar(c: ScalarCoeff) -> Self {
        OperatorExpr::term(c, TermKey::UNIT)
    }

    pub fn int(n: i64) -> Self {
        OperatorExpr::scalar(ScalarCoeff::int(n))
    }

    pub fn term(c: ScalarCoeff, key: TermKey) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        OperatorExpr { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (TermKey, ScalarCoeff)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            add_into(&mut map, k, c);
        }
        OperatorExpr { terms: map }
    }

    /// Position `Q_axis` (`axis` in `0..3`).
    pub fn q(axis: usize) -> Self {
        let mut key = TermKey::UNIT;
        key.q[axis] = 1;
        OperatorExpr::term(ScalarCoeff::one(), key)
    }

    /// Momentum `P_axis`.
    pub fn p(axis: usize) -> Self {
        OperatorExpr::scalar(ScalarCoeff::momentum(axis))
    }

    /// Spin `S_axis`.
    pub fn s(axis: usize) -> Self {
        let mut key = TermKey::UNIT;
        key.s[axis] = 1;
        OperatorExpr::term(ScalarCoeff::one(), key)
    }

    pub fn lam() -> Self {
        OperatorExpr::term(
            ScalarCoeff::one(),
            TermKey {
                lam: true,
                ..TermKey::UNIT
            },
        )
    }

    pub fn var(v: Var) -> Self {
        OperatorExpr::scalar(ScalarCoeff::var(v))
    }

    pub fn omega() -> Self {
        OperatorExpr::var(Var::Omega)
    }

    pub fn mass() -> Self {
        OperatorExpr::var(Var::Mass)
    }

    pub fn time() -> Self {
        OperatorExpr::var(Var::Time)
    }

    pub fn hbar() -> Self {
        OperatorExpr::var(Var::Hbar)
    }

    pub fn i_hbar() -> Self {
        OperatorExpr::scalar(ScalarCoeff::i_hbar())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &ScalarCoeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &TermKey) -> Option<&ScalarCoeff> {
        self.terms.get(key)
    }

    /// The coefficient if the expression is a pure scalar (no `Q`, `S`, `Λ`).
    pub fn as_scalar(&self) -> Option<ScalarCoeff> {
        match self.terms.len() {
            0 => Some(ScalarCoeff::zero()),
            1 => self.terms.get(&TermKey::UNIT).cloned(),
            _ => None,
        }
    }

    pub fn contains_q(&self) -> bool {
        self.terms.keys().any(|k| k.q != [0; 3])
    }

    pub fn contains_s(&self) -> bool {
        self.terms.keys().any(|k| k.s != [0; 3])
    }

    pub fn contains_lam(&self) -> bool {
        self.terms.keys().any(|k| k.lam)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.values().any(|c| c.depends_on(v))
    }

    pub fn neg(&self) -> Self {
        OperatorExpr {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut map, *k, c.clone());
        }
        OperatorExpr { terms: map }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut map = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut map, *k, c.neg());
        }
        OperatorExpr { terms: map }
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, c: &ScalarCoeff) -> Self {
        if c.is_zero() {
            return OperatorExpr::zero();
        }
        OperatorExpr::from_terms(self.terms.iter().map(|(k, x)| (*k, c.mul(x))))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if n == 0 {
            return OperatorExpr::zero();
        }
        let k = rat(n);
        OperatorExpr {
            terms: self.terms.iter().map(|(key, c)| (*key, c.scale_rat(&k))).collect(),
        }
    }

    pub fn half(&self) -> Self {
        self.scale(&ScalarCoeff::frac(1, 2))
    }

    /// Noncommutative product, returned in normal form.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return OperatorExpr::zero();
        }
        let mut amax = [0u8; 3];
        for k in self.terms.keys() {
            for ax in 0..3 {
                amax[ax] = amax[ax].max(k.q[ax]);
            }
        }
        let ih = ScalarCoeff::i_hbar();
        let mut out = BTreeMap::new();
        for (kb, cb) in &other.terms {
            // ∂^k cb for every multi-index k ≤ amax.
            let dims = [amax[0] as usize + 1, amax[1] as usize + 1, amax[2] as usize + 1];
            let mut derivs: Vec<ScalarCoeff> = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
            let idx = |a: usize, b: usize, c: usize| (a * dims[1] + b) * dims[2] + c;
            for a in 0..dims[0] {
                for b in 0..dims[1] {
                    for c in 0..dims[2] {
                        let d = if c > 0 {
                            derivs[idx(a, b, c - 1)].partial_momentum(2)
                        } else if b > 0 {
                            derivs[idx(a, b - 1, 0)].partial_momentum(1)
                        } else if a > 0 {
                            derivs[idx(a - 1, 0, 0)].partial_momentum(0)
                        } else {
                            cb.clone()
                        };
                        derivs.push(d);
                    }
                }
            }
            for (ka, ca) in &self.terms {
                let spin = smono_product(&ka.s, &kb.s);
                let lam = ka.lam ^ kb.lam;
                for k0 in 0..=ka.q[0] {
                    for k1 in 0..=ka.q[1] {
                        for k2 in 0..=ka.q[2] {
                            let d = &derivs[idx(k0 as usize, k1 as usize, k2 as usize)];
                            if d.is_zero() {
                                continue;
                            }
                            let order = (k0 + k1 + k2) as u32;
                            let binom = binomial(ka.q[0], k0) * binomial(ka.q[1], k1) * binomial(ka.q[2], k2);
                            let mut c = ca.mul(d).scale_rat(&rat(binom));
                            if order > 0 {
                                c = c.mul(&ih.pow(order));
                            }
                            let q = [
                                ka.q[0] - k0 + kb.q[0],
                                ka.q[1] - k1 + kb.q[1],
                                ka.q[2] - k2 + kb.q[2],
                            ];
                            for (sm, sc) in spin.iter() {
                                let coeff = if *sc == Poly::one() {
                                    c.clone()
                                } else {
                                    c.mul(&ScalarCoeff::from_poly(sc.clone()))
                                };
                                add_into(&mut out, TermKey { q, s: *sm, lam }, coeff);
                            }
                        }
                    }
                }
            }
        }
        OperatorExpr { terms: out }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = OperatorExpr::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `[a, b] = ab − ba`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `(1/iħ)[a, b]`
    pub fn bracket(&self, other: &Self) -> Self {
        self.commutator(other).scale(&inv_i_hbar())
    }

    /// `½(ab + ba)`
    pub fn sym_product(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self)).half()
    }

    /// Hermitian adjoint; `Q`, `P`, `S`, `Λ` are self-adjoint.
    pub fn adjoint(&self) -> Self {
        let mut out = OperatorExpr::zero();
        for (k, c) in &self.terms {
            let qpart = OperatorExpr::term(
                ScalarCoeff::one(),
                TermKey {
                    q: k.q,
                    ..TermKey::UNIT
                },
            );
            let mut t = qpart.mul(&OperatorExpr::scalar(c.conj()));
            for axis in (0..3).rev() {
                for _ in 0..k.s[axis] {
                    t = t.mul(&OperatorExpr::s(axis));
                }
            }
            if k.lam {
                t = t.mul(&OperatorExpr::lam());
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitutes `Λ = ±1` (identity in [`SectorMode::Full`]).
    pub fn sector(&self, mode: SectorMode) -> Self {
        let Some(sign) = mode.sign() else {
            return self.clone();
        };
        OperatorExpr::from_terms(self.terms.iter().map(|(k, c)| {
            if k.lam {
                (TermKey { lam: false, ..*k }, c.scale_rat(&rat(sign)))
            } else {
                (*k, c.clone())
            }
        }))
    }

    /// Drops every term containing spin.
    pub fn without_spin(&self) -> Self {
        OperatorExpr {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.s == [0; 3])
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Rewrites `S3²` through `S1² + S2² + S3² = ħ² s(s+1)` until no term
    /// carries `S3` to a power above one.
    pub fn reduce_casimir(&self, spin: Spin) -> Self {
        let cas = ScalarCoeff::from_rat(spin.casimir()).mul(&ScalarCoeff::hbar().pow(2));
        let s3_sq = OperatorExpr::scalar(cas)
            .sub(&OperatorExpr::s(0).pow(2))
            .sub(&OperatorExpr::s(1).pow(2));
        let mut cur = self.clone();
        loop {
            let Some((key, _)) = cur.terms.iter().find(|(k, _)| k.s[2] >= 2) else {
                return cur;
            };
            let key = *key;
            let c = cur.terms.remove(&key).expect("present");
            let head = OperatorExpr::term(
                c,
                TermKey {
                    s: [key.s[0], key.s[1], 0],
                    lam: key.lam,
                    ..key
                },
            );
            let tail = OperatorExpr::term(
                ScalarCoeff::one(),
                TermKey {
                    s: [0, 0, key.s[2] - 2],
                    ..TermKey::UNIT
                },
            );
            cur = cur.add(&head.mul(&s3_sq).mul(&tail));
        }
    }

    /// `∂/∂t` of the explicit time dependence in the coefficients.
    pub fn time_partial(&self) -> Self {
        OperatorExpr::from_terms(self.terms.iter().map(|(k, c)| (*k, c.partial(Var::Time))))
    }

    /// `∂e/∂t + (1/iħ)[e, H]`
    pub fn total_time_derivative(&self, hamiltonian: &Self) -> Self {
        self.time_partial().add(&self.bracket(hamiltonian))
    }

    /// Inverse of an element `a + bΛ` with `a`, `b` free of `Q` and `S`:
    /// `(a − bΛ)/(a² − b²)`.
    pub fn inverse_central(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::Malformed("division by zero".into()));
        }
        let lam_key = TermKey {
            lam: true,
            ..TermKey::UNIT
        };
        if self.terms.keys().any(|k| *k != TermKey::UNIT && *k != lam_key) {
            return Err(AlgebraError::Malformed(format!(
                "cannot divide by `{self}`: divisor must be free of Q and S"
            )));
        }
        let a = self.terms.get(&TermKey::UNIT).cloned().unwrap_or_default();
        let b = self.terms.get(&lam_key).cloned().unwrap_or_default();
        let norm = a.mul(&a).sub(&b.mul(&b));
        let inv = norm.inv().map_err(|e| match e {
            AlgebraError::Malformed(_) => AlgebraError::Malformed(format!(
                "`{self}` is a zero divisor (it vanishes on one sector)"
            )),
            other => other,
        })?;
        Ok(OperatorExpr::from_terms([
            (TermKey::UNIT, a.mul(&inv)),
            (lam_key, b.neg().mul(&inv)),
        ]))
    }

    /// Applies a coefficient-level map to every term.
    pub fn map_coeffs(
        &self,
        mut f: impl FnMut(&ScalarCoeff) -> Result<ScalarCoeff, AlgebraError>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            out.push((*k, f(c)?));
        }
        Ok(OperatorExpr::from_terms(out))
    }
}

/// `1/(iħ) = −i/ħ`
pub fn inv_i_hbar() -> ScalarCoeff {
    ScalarCoeff::i().neg().mul(&ScalarCoeff::hbar().inv().expect("ħ is invertible"))
}

/// Renders one term; `first` controls whether a leading `+` is dropped.
fn render_term(out: &mut String, key: &TermKey, c: &ScalarCoeff, first: bool) {
    let (negative, c) = if c.is_negative_monomial() {
        (true, c.neg())
    } else {
        (false, c.clone())
    };
    let ops = key.render_ops();
    let body = if ops.is_empty() {
        c.to_string()
    } else if c.is_one() {
        ops
    } else if c.is_sum() && !c.has_denominator() {
        format!("({c})*{ops}")
    } else {
        format!("{c}*{ops}")
    };
    match (first, negative) {
        (true, false) => {}
        (true, true) => out.push('-'),
        (false, false) => out.push_str(" + "),
        (false, true) => out.push_str(" - "),
    }
    out.push_str(&body);
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            render_term(&mut s, k, c, n == 0);
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorExpr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutation() {
        let r = OperatorExpr::q(0).commutator(&OperatorExpr::p(0));
        assert_eq!(r, OperatorExpr::i_hbar());
        assert!(OperatorExpr::q(0).commutator(&OperatorExpr::p(1)).is_zero());
    }

    #[test]
    fn p_q_reorders() {
        let r = OperatorExpr::p(0).mul(&OperatorExpr::q(0));
        let expect = OperatorExpr::q(0).mul(&OperatorExpr::p(0)).sub(&OperatorExpr::i_hbar());
        assert_eq!(r, expect);
        assert_eq!(r.to_string(), "P1*Q1");
    }

    #[test]
    fn spin_algebra() {
        let r = OperatorExpr::s(1).mul(&OperatorExpr::s(0));
        let expect = OperatorExpr::s(0)
            .mul(&OperatorExpr::s(1))
            .sub(&OperatorExpr::s(2).scale(&ScalarCoeff::i_hbar()));
        assert_eq!(r, expect);
        assert_eq!(OperatorExpr::lam().mul(&OperatorExpr::lam()), OperatorExpr::one());
    }

    #[test]
    fn q_omega_commutator() {
        let r = OperatorExpr::q(0).commutator(&OperatorExpr::omega());
        let expect = ScalarCoeff::i_hbar()
            .mul(&ScalarCoeff::momentum(0))
            .div(&ScalarCoeff::omega())
            .unwrap();
        assert_eq!(r, OperatorExpr::scalar(expect));
    }

    #[test]
    fn second_order_reordering() {
        // Q1² ω − ω Q1² = 2iħ (P1/ω) Q1 + (iħ)² ∂²ω/∂P1²
        let q2 = OperatorExpr::q(0).pow(2);
        let w = OperatorExpr::omega();
        let lhs = q2.commutator(&w);
        let q = OperatorExpr::q(0);
        let rhs = q.commutator(&w).mul(&q).add(&q.mul(&q.commutator(&w)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_is_involution() {
        let e = OperatorExpr::q(0)
            .mul(&OperatorExpr::s(2))
            .mul(&OperatorExpr::s(0))
            .scale(&ScalarCoeff::i().mul(&ScalarCoeff::omega()))
            .add(&OperatorExpr::lam().mul(&OperatorExpr::q(1)));
        assert_eq!(e.adjoint().adjoint(), e);
        assert_eq!(OperatorExpr::q(2).adjoint(), OperatorExpr::q(2));
    }

    #[test]
    fn central_inverse_of_h_plus_m() {
        let h_plus_m = OperatorExpr::lam().mul(&OperatorExpr::omega()).add(&OperatorExpr::mass());
        let inv = h_plus_m.inverse_central().unwrap();
        assert_eq!(inv.mul(&h_plus_m), OperatorExpr::one());
        assert!(OperatorExpr::q(0).inverse_central().is_err());
        let zero_divisor = OperatorExpr::one().add(&OperatorExpr::lam());
        assert!(zero_divisor.inverse_central().is_err());
    }

    #[test]
    fn casimir_reduction() {
        let s_sq = (0..3)
            .map(|a| OperatorExpr::s(a).pow(2))
            .fold(OperatorExpr::zero(), |x, y| x.add(&y));
        let r = s_sq.reduce_casimir(Spin::HALF);
        let want = ScalarCoeff::frac(3, 4).mul(&ScalarCoeff::hbar().pow(2));
        assert_eq!(r, OperatorExpr::scalar(want));
    }
}
