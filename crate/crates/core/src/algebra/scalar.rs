//! Exact commuting coefficients.
//!
//! A [`ScalarCoeff`] is a fraction whose numerator is a [`Poly`] (so it may
//! contain `i`, `ω`, `ω′`, `√2`, `√3` to the first power) and whose
//! denominator is a product of [`Atom`]s. Every atom is irreducible over the
//! rationals and no two are associates, so "no atom of the denominator
//! divides the numerator" is a unique canonical form.
//!
//! Inversion multiplies by all Galois conjugates of the numerator, which
//! leaves a norm in the base polynomial ring; the norm must factor over the
//! atoms. That covers every denominator built from `ω`, `ω ± m`, `ω′`,
//! `ω′ ± 2m`, the plain symbols and `P²`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::poly::{rat, Mono, Point, Poly, Rat, Var, ONE_MONO};
use super::AlgebraError;

pub const NATOMS: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    P1,
    P2,
    P3,
    Mass,
    Time,
    Hbar,
    MassB,
    E0,
    /// `P1² + P2² + P3²`
    PSq,
    /// `P² + m²`, i.e. `ω²`
    OmegaSq,
    /// `P² + 4m²`, i.e. `ω′²`
    Omega2mSq,
}

impl Atom {
    pub const ALL: [Atom; NATOMS] = [
        Atom::P1,
        Atom::P2,
        Atom::P3,
        Atom::Mass,
        Atom::Time,
        Atom::Hbar,
        Atom::MassB,
        Atom::E0,
        Atom::PSq,
        Atom::OmegaSq,
        Atom::Omega2mSq,
    ];

    fn as_var(self) -> Option<Var> {
        Some(match self {
            Atom::P1 => Var::P1,
            Atom::P2 => Var::P2,
            Atom::P3 => Var::P3,
            Atom::Mass => Var::Mass,
            Atom::Time => Var::Time,
            Atom::Hbar => Var::Hbar,
            Atom::MassB => Var::MassB,
            Atom::E0 => Var::E0,
            _ => return None,
        })
    }

    pub fn poly(self) -> Poly {
        if let Some(v) = self.as_var() {
            return Poly::var(v);
        }
        let sq = |v: Var| {
            let mut m = ONE_MONO;
            m[v as usize] = 2;
            m
        };
        let mass_k = match self {
            Atom::PSq => 0,
            Atom::OmegaSq => 1,
            _ => 4,
        };
        Poly::from_terms([
            (sq(Var::P1), rat(1)),
            (sq(Var::P2), rat(1)),
            (sq(Var::P3), rat(1)),
            (sq(Var::Mass), rat(mass_k)),
        ])
    }

    /// `∂atom/∂v` for a base variable.
    fn partial(self, v: Var) -> Poly {
        self.poly().partial(v)
    }

    fn render(self, exp: u8) -> String {
        match (self.as_var(), self) {
            (Some(v), _) if exp == 1 => v.name().to_string(),
            (Some(v), _) => format!("{}^{}", v.name(), exp),
            (None, Atom::OmegaSq) => format!("omega^{}", 2 * exp as u32),
            (None, Atom::Omega2mSq) => format!("omega2m^{}", 2 * exp as u32),
            (None, _) if exp == 1 => "(P1^2 + P2^2 + P3^2)".to_string(),
            (None, _) => format!("(P1^2 + P2^2 + P3^2)^{}", exp),
        }
    }
}

/// Exact coefficient `num / Π atomᵏ` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarCoeff {
    num: Poly,
    den: [u8; NATOMS],
}

impl ScalarCoeff {
    pub fn zero() -> Self {
        ScalarCoeff::default()
    }

    pub fn one() -> Self {
        ScalarCoeff::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        ScalarCoeff {
            num,
            den: [0; NATOMS],
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        ScalarCoeff::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        ScalarCoeff::from_rat(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ScalarCoeff::from_rat(super::poly::rat_frac(n, d))
    }

    pub fn var(v: Var) -> Self {
        ScalarCoeff::from_poly(Poly::var(v))
    }

    pub fn i() -> Self {
        ScalarCoeff::var(Var::I)
    }

    pub fn hbar() -> Self {
        ScalarCoeff::var(Var::Hbar)
    }

    /// `iħ`
    pub fn i_hbar() -> Self {
        ScalarCoeff::from_poly(Poly::var(Var::I).mul(&Poly::var(Var::Hbar)))
    }

    pub fn momentum(axis: usize) -> Self {
        ScalarCoeff::var(Var::momentum(axis))
    }

    pub fn mass() -> Self {
        ScalarCoeff::var(Var::Mass)
    }

    pub fn omega() -> Self {
        ScalarCoeff::var(Var::Omega)
    }

    pub fn time() -> Self {
        ScalarCoeff::var(Var::Time)
    }

    /// Builds `num / Π atomᵏ` and reduces it to canonical form.
    pub fn from_parts(num: Poly, den: [u8; NATOMS]) -> Self {
        let mut s = ScalarCoeff { num, den };
        s.canonicalize();
        s
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &[u8; NATOMS] {
        &self.den
    }

    pub fn denominator_poly(&self) -> Poly {
        let mut out = Poly::one();
        for (k, a) in Atom::ALL.iter().enumerate() {
            if self.den[k] > 0 {
                out = out.mul(&a.poly().pow(self.den[k] as u32));
            }
        }
        out
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = [0; NATOMS];
            return;
        }
        for (k, atom) in Atom::ALL.iter().enumerate() {
            if self.den[k] == 0 {
                continue;
            }
            if let Some(v) = atom.as_var() {
                let lo = self.num.terms().iter().map(|(m, _)| m[v as usize]).min().unwrap_or(0);
                let cancel = lo.min(self.den[k]);
                if cancel > 0 {
                    self.num = Poly::from_terms(self.num.terms().iter().map(|(m, c)| {
                        let mut nm: Mono = *m;
                        nm[v as usize] -= cancel;
                        (nm, c.clone())
                    }));
                    self.den[k] -= cancel;
                }
            } else {
                let ap = atom.poly();
                while self.den[k] > 0 {
                    match self.num.div_exact(&ap) {
                        Some(q) => {
                            self.num = q;
                            self.den[k] -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == [0; NATOMS] && self.num == Poly::one()
    }

    /// True when the value is a rational constant.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.den == [0; NATOMS] {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        if self.num.depends_on(v) {
            return true;
        }
        Atom::ALL
            .iter()
            .enumerate()
            .any(|(k, a)| self.den[k] > 0 && a.poly().depends_on(v))
    }

    /// True if the value depends on the momentum (directly or through `ω`).
    pub fn depends_on_momentum(&self) -> bool {
        [Var::P1, Var::P2, Var::P3, Var::Omega, Var::Omega2m]
            .iter()
            .any(|v| self.depends_on(*v))
    }

    pub fn neg(&self) -> Self {
        ScalarCoeff {
            num: self.num.neg(),
            den: self.den,
        }
    }

    pub fn scale_rat(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return ScalarCoeff::zero();
        }
        ScalarCoeff {
            num: self.num.scale(k),
            den: self.den,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return ScalarCoeff::from_parts(self.num.add(&other.num), self.den);
        }
        let mut den = [0u8; NATOMS];
        let mut fa = Poly::one();
        let mut fb = Poly::one();
        for (k, atom) in Atom::ALL.iter().enumerate() {
            den[k] = self.den[k].max(other.den[k]);
            if den[k] > self.den[k] {
                fa = fa.mul(&atom.poly().pow((den[k] - self.den[k]) as u32));
            }
            if den[k] > other.den[k] {
                fb = fb.mul(&atom.poly().pow((den[k] - other.den[k]) as u32));
            }
        }
        ScalarCoeff::from_parts(self.num.mul(&fa).add(&other.num.mul(&fb)), den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ScalarCoeff::zero();
        }
        let mut den = self.den;
        let mut any = false;
        for k in 0..NATOMS {
            den[k] += other.den[k];
            any |= den[k] > 0;
        }
        let num = self.num.mul(&other.num);
        if !any {
            return ScalarCoeff::from_poly(num);
        }
        ScalarCoeff::from_parts(num, den)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = ScalarCoeff::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::Malformed("division by zero coefficient".into()));
        }
        let mut norm = self.num.clone();
        let mut cofactor = Poly::one();
        for g in [Var::I, Var::Omega, Var::Omega2m, Var::Sqrt2, Var::Sqrt3] {
            if norm.depends_on(g) {
                let c = norm.conjugate(g);
                cofactor = cofactor.mul(&c);
                norm = norm.mul(&c);
            }
        }
        let mut den = [0u8; NATOMS];
        for (k, atom) in Atom::ALL.iter().enumerate() {
            let ap = atom.poly();
            while !norm.is_constant() {
                let Some(q) = norm.div_exact(&ap) else { break };
                norm = q;
                den[k] += 1;
            }
        }
        let c = norm
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| AlgebraError::NotInvertible(self.to_string()))?;
        let num = cofactor.mul(&self.denominator_poly()).scale(&c.recip());
        Ok(ScalarCoeff::from_parts(num, den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Complex conjugate (`i → -i`; every other generator is real).
    pub fn conj(&self) -> Self {
        ScalarCoeff {
            num: self.num.conjugate(Var::I),
            den: self.den,
        }
    }

    /// `∂ω/∂v` or `∂ω′/∂v` as an element of the ring.
    fn radical_partial(g: Var, v: Var) -> ScalarCoeff {
        let (atom, k) = match g {
            Var::Omega => (Atom::OmegaSq, 1),
            _ => (Atom::Omega2mSq, 4),
        };
        let coeff = match v {
            Var::P1 | Var::P2 | Var::P3 => Poly::var(v),
            Var::Mass => Poly::var(Var::Mass).scale(&rat(k)),
            _ => return ScalarCoeff::zero(),
        };
        let mut den = [0u8; NATOMS];
        den[atom as usize] = 1;
        ScalarCoeff::from_parts(coeff.mul(&Poly::var(g)), den)
    }

    /// Formal partial derivative with respect to a base indeterminate, with
    /// `∂ω/∂Pᵢ = Pᵢ/ω` and `∂ω/∂m = m/ω` (likewise for `ω′`).
    pub fn partial(&self, v: Var) -> Self {
        assert!(!v.is_algebraic(), "cannot differentiate by an algebraic generator");
        if self.is_zero() {
            return ScalarCoeff::zero();
        }
        let inv_den = ScalarCoeff {
            num: Poly::one(),
            den: self.den,
        };
        let mut dnum = ScalarCoeff::from_poly(self.num.partial(v));
        for g in [Var::Omega, Var::Omega2m] {
            if self.num.depends_on(g) {
                let (_, b) = self.num.split(g);
                dnum = dnum.add(&ScalarCoeff::from_poly(b).mul(&ScalarCoeff::radical_partial(g, v)));
            }
        }
        let mut out = dnum.mul(&inv_den);
        for (k, atom) in Atom::ALL.iter().enumerate() {
            if self.den[k] == 0 {
                continue;
            }
            let da = atom.partial(v);
            if da.is_zero() {
                continue;
            }
            let mut d = [0u8; NATOMS];
            d[k] = 1;
            let log_deriv = ScalarCoeff::from_parts(da.scale(&rat(self.den[k] as i64)), d);
            out = out.sub(&self.mul(&log_deriv));
        }
        out
    }

    pub fn partial_momentum(&self, axis: usize) -> Self {
        self.partial(Var::momentum(axis))
    }

    /// Replaces a base variable by a rational constant. Fails if an atom
    /// in the denominator vanishes.
    pub fn substitute(&self, v: Var, value: &Rat) -> Result<Self, AlgebraError> {
        let num = ScalarCoeff::from_poly(self.num.substitute(v, value));
        let den = ScalarCoeff::from_poly(self.denominator_poly().substitute(v, value));
        num.div(&den)
    }

    /// Positive square root when it exists in the ring: `m`, `ħ`, `M`, `ω`,
    /// `ω′` and `P²` are treated as positive quantities.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(ScalarCoeff::zero());
        }
        if Var::ALL.iter().any(|g| g.is_algebraic() && self.num.depends_on(*g)) {
            return None;
        }
        let mut num = self.num.clone();
        let mut exps = [0i32; NATOMS];
        for (k, atom) in Atom::ALL.iter().enumerate() {
            let ap = atom.poly();
            while !num.is_constant() {
                match num.div_exact(&ap) {
                    Some(q) => {
                        num = q;
                        exps[k] += 1;
                    }
                    None => break,
                }
            }
            exps[k] -= self.den[k] as i32;
        }
        let c = num.constant_value()?;
        if c.is_negative() {
            return None;
        }
        let root = |n: &BigInt| -> Option<BigInt> {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        };
        let croot = Rat::new(root(c.numer())?, root(c.denom())?);
        let mut out = ScalarCoeff::from_rat(croot);
        for (k, atom) in Atom::ALL.iter().enumerate() {
            let e = exps[k];
            if e == 0 {
                continue;
            }
            let factor = match atom {
                Atom::Mass | Atom::Hbar | Atom::MassB | Atom::PSq if e % 2 == 0 => {
                    ScalarCoeff::from_poly(atom.poly()).pow(((e.unsigned_abs() / 2)))
                }
                Atom::OmegaSq | Atom::Omega2mSq => {
                    let g = if *atom == Atom::OmegaSq { Var::Omega } else { Var::Omega2m };
                    ScalarCoeff::var(g).pow(e.unsigned_abs())
                }
                _ => return None,
            };
            out = if e > 0 { out.mul(&factor) } else { out.div(&factor).ok()? };
        }
        Some(out)
    }

    pub fn eval(&self, pt: &Point) -> Complex64 {
        let vals: Vec<Complex64> = Var::ALL.iter().map(|v| pt.value(*v)).collect();
        self.eval_with(&vals)
    }

    /// Evaluates with precomputed generator values (indexed like [`Var::ALL`]).
    pub fn eval_with(&self, vals: &[Complex64]) -> Complex64 {
        let mut d = Complex64::one();
        for (k, atom) in Atom::ALL.iter().enumerate() {
            if self.den[k] > 0 {
                d *= atom.poly().eval_with(vals).powi(self.den[k] as i32);
            }
        }
        self.num.eval_with(vals) / d
    }

    /// True when the numerator is a single term with a negative coefficient,
    /// so a caller rendering a sum can print ` - |c|`.
    pub(crate) fn is_negative_monomial(&self) -> bool {
        matches!(self.num.terms(), [(_, c)] if c.is_negative())
    }

    pub(crate) fn is_sum(&self) -> bool {
        self.num.terms().len() > 1
    }

    pub(crate) fn has_denominator(&self) -> bool {
        self.den.iter().any(|&e| e > 0)
    }
}

impl fmt::Display for ScalarCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.has_denominator() {
            return write!(f, "{}", self.num);
        }
        if self.is_sum() {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let parts: Vec<String> = Atom::ALL
            .iter()
            .enumerate()
            .filter(|(k, _)| self.den[*k] > 0)
            .map(|(k, a)| a.render(self.den[k]))
            .collect();
        let p = &parts[0];
        let bare = !p.contains('^') && !p.starts_with('(');
        if parts.len() == 1 && (bare || (p.starts_with('(') && p.ends_with(')'))) {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.join("*"))
        }
    }
}

impl fmt::Debug for ScalarCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarCoeff({})", self)
    }
}
