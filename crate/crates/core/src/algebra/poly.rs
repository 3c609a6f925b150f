//! Sparse multivariate polynomials over the rationals.
//!
//! The variable set is fixed. Five variables are algebraic generators with
//! quadratic relations: `i² = -1`, `ω² = P² + m²`, `ω′² = P² + 4m²`,
//! `√2² = 2` and `√3² = 3`. [`Poly::mul`] reduces products so those
//! generators never carry an exponent above one; everything else is an
//! ordinary commuting indeterminate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub const NVARS: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Var {
    I = 0,
    Omega,
    Omega2m,
    Sqrt2,
    Sqrt3,
    P1,
    P2,
    P3,
    Mass,
    Time,
    Hbar,
    /// Galilean mass constant of the Bargmann construction.
    MassB,
    E0,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::I,
        Var::Omega,
        Var::Omega2m,
        Var::Sqrt2,
        Var::Sqrt3,
        Var::P1,
        Var::P2,
        Var::P3,
        Var::Mass,
        Var::Time,
        Var::Hbar,
        Var::MassB,
        Var::E0,
    ];

    pub fn momentum(axis: usize) -> Var {
        [Var::P1, Var::P2, Var::P3][axis]
    }

    /// Generators that satisfy a quadratic relation.
    pub fn is_algebraic(self) -> bool {
        (self as u8) <= (Var::Sqrt3 as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::I => "i",
            Var::Omega => "omega",
            Var::Omega2m => "omega2m",
            Var::Sqrt2 => "sqrt2",
            Var::Sqrt3 => "sqrt3",
            Var::P1 => "P1",
            Var::P2 => "P2",
            Var::P3 => "P3",
            Var::Mass => "m",
            Var::Time => "t",
            Var::Hbar => "hbar",
            Var::MassB => "M",
            Var::E0 => "E0",
        }
    }
}

pub type Mono = [u8; NVARS];

pub const ONE_MONO: Mono = [0; NVARS];

pub fn var_mono(v: Var) -> Mono {
    let mut m = ONE_MONO;
    m[v as usize] = 1;
    m
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Numeric values of the base indeterminates, used for evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub p: [f64; 3],
    pub mass: f64,
    pub time: f64,
    pub hbar: f64,
    pub mass_b: f64,
    pub e0: f64,
}

impl Point {
    pub fn new(p: [f64; 3], mass: f64) -> Self {
        Point {
            p,
            mass,
            time: 0.0,
            hbar: 1.0,
            mass_b: 1.0,
            e0: 0.0,
        }
    }

    pub fn p_sq(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    pub fn value(&self, v: Var) -> Complex64 {
        let r = |x: f64| Complex64::new(x, 0.0);
        match v {
            Var::I => Complex64::new(0.0, 1.0),
            Var::Omega => r((self.p_sq() + self.mass * self.mass).sqrt()),
            Var::Omega2m => r((self.p_sq() + 4.0 * self.mass * self.mass).sqrt()),
            Var::Sqrt2 => r(std::f64::consts::SQRT_2),
            Var::Sqrt3 => r(3f64.sqrt()),
            Var::P1 => r(self.p[0]),
            Var::P2 => r(self.p[1]),
            Var::P3 => r(self.p[2]),
            Var::Mass => r(self.mass),
            Var::Time => r(self.time),
            Var::Hbar => r(self.hbar),
            Var::MassB => r(self.mass_b),
            Var::E0 => r(self.e0),
        }
    }
}

/// A polynomial stored as a list of `(monomial, coefficient)` pairs sorted by
/// monomial (lexicographic on the exponent vector), with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(ONE_MONO, c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly {
            terms: vec![(var_mono(v), Rat::one())],
        }
    }

    pub fn monomial(m: Mono, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted terms; like terms are merged.
    /// Exponents of algebraic generators are NOT reduced here.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| *m == ONE_MONO)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if *m == ONE_MONO => Some(c.clone()),
            _ => None,
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m[v as usize] > 0)
    }

    pub fn max_degree(&self, v: Var) -> u8 {
        self.terms.iter().map(|(m, _)| m[v as usize]).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.last()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Product in the quotient ring (algebraic generators reduced).
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Mono, Rat> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for k in 0..NVARS {
                    m[k] += mb[k];
                }
                push_reduced(&mut acc, m, ca * cb);
            }
        }
        collect_acc(acc)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact division in the free polynomial ring. Returns `None` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_m, lead_c) = divisor.leading()?.clone();
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut rem: BTreeMap<Mono, Rat> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, Rat)> = Vec::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let mut qm = ONE_MONO;
            for k in 0..NVARS {
                if m[k] < lead_m[k] {
                    return None;
                }
                qm[k] = m[k] - lead_m[k];
            }
            let qc = &c / &lead_c;
            for (dm, dc) in &divisor.terms {
                let mut tm = *dm;
                for k in 0..NVARS {
                    tm[k] += qm[k];
                }
                let e = rem.entry(tm).or_insert_with(Rat::zero);
                *e -= &qc * dc;
                if e.is_zero() {
                    rem.remove(&tm);
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Partial derivative with respect to a base variable, holding the
    /// algebraic generators fixed.
    pub fn partial(&self, v: Var) -> Poly {
        let k = v as usize;
        Poly::from_terms(self.terms.iter().filter(|(m, _)| m[k] > 0).map(|(m, c)| {
            let mut nm = *m;
            nm[k] -= 1;
            (nm, c * rat(m[k] as i64))
        }))
    }

    /// Splits off the part linear in an algebraic generator: returns
    /// `(a, b)` with `self = a + b·g`.
    pub fn split(&self, g: Var) -> (Poly, Poly) {
        let k = g as usize;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (m, c) in &self.terms {
            if m[k] == 0 {
                a.push((*m, c.clone()));
            } else {
                let mut nm = *m;
                nm[k] -= 1;
                b.push((nm, c.clone()));
            }
        }
        (Poly::from_terms(a), Poly::from_terms(b))
    }

    /// Galois conjugation `g → -g` for an algebraic generator.
    pub fn conjugate(&self, g: Var) -> Poly {
        let k = g as usize;
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m[k] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Substitutes a rational constant for a base variable.
    pub fn substitute(&self, v: Var, value: &Rat) -> Poly {
        let k = v as usize;
        let mut acc: HashMap<Mono, Rat> = HashMap::new();
        for (m, c) in &self.terms {
            let mut nm = *m;
            let e = nm[k];
            nm[k] = 0;
            let mut f = c.clone();
            for _ in 0..e {
                f *= value;
            }
            *acc.entry(nm).or_insert_with(Rat::zero) += f;
        }
        collect_acc(acc)
    }

    pub fn eval(&self, pt: &Point) -> Complex64 {
        let vals: Vec<Complex64> = Var::ALL.iter().map(|v| pt.value(*v)).collect();
        self.eval_with(&vals)
    }

    pub fn eval_with(&self, vals: &[Complex64]) -> Complex64 {
        let mut total = Complex64::zero();
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= vals[k].powi(e as i32);
                }
            }
            total += t;
        }
        total
    }

    /// Integer content and primitive-ness are not tracked; this returns the
    /// gcd-free "sign" of the leading coefficient.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }
}

fn collect_acc(acc: HashMap<Mono, Rat>) -> Poly {
    let mut terms: Vec<(Mono, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_unstable_by_key(|a| a.0);
    Poly { terms }
}

/// The radicand `P1² + P2² + P3² + k·m²`.
fn radicand_terms(k: i64) -> [(Mono, Rat); 4] {
    let sq = |v: Var| {
        let mut m = ONE_MONO;
        m[v as usize] = 2;
        m
    };
    [
        (sq(Var::P1), rat(1)),
        (sq(Var::P2), rat(1)),
        (sq(Var::P3), rat(1)),
        (sq(Var::Mass), rat(k)),
    ]
}

fn push_reduced(acc: &mut HashMap<Mono, Rat>, mut m: Mono, mut c: Rat) {
    if m[Var::I as usize] >= 2 {
        m[Var::I as usize] -= 2;
        c = -c;
    }
    if m[Var::Sqrt2 as usize] >= 2 {
        m[Var::Sqrt2 as usize] -= 2;
        c *= rat(2);
    }
    if m[Var::Sqrt3 as usize] >= 2 {
        m[Var::Sqrt3 as usize] -= 2;
        c *= rat(3);
    }
    for (g, k) in [(Var::Omega, 1), (Var::Omega2m, 4)] {
        if m[g as usize] >= 2 {
            m[g as usize] -= 2;
            for (rm, rc) in radicand_terms(k) {
                let mut nm = m;
                for j in 0..NVARS {
                    nm[j] += rm[j];
                }
                push_reduced(acc, nm, &c * rc);
            }
            return;
        }
    }
    let e = acc.entry(m).or_insert_with(Rat::zero);
    *e += c;
}

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_mono(m: &Mono) -> Vec<String> {
    let mut parts = Vec::new();
    for v in Var::ALL {
        let e = m[v as usize];
        match e {
            0 => {}
            1 => parts.push(v.name().to_string()),
            _ => parts.push(format!("{}^{}", v.name(), e)),
        }
    }
    parts
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest monomial first reads more naturally.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let factors = fmt_mono(m);
            if factors.is_empty() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: Var) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn omega_squared_reduces_to_radicand() {
        let w = p(Var::Omega);
        let w2 = w.mul(&w);
        let expect = p(Var::P1)
            .mul(&p(Var::P1))
            .add(&p(Var::P2).mul(&p(Var::P2)))
            .add(&p(Var::P3).mul(&p(Var::P3)))
            .add(&p(Var::Mass).mul(&p(Var::Mass)));
        assert_eq!(w2, expect);
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = p(Var::I);
        assert_eq!(i.mul(&i), Poly::constant(rat(-1)));
        let s6 = p(Var::Sqrt2).mul(&p(Var::Sqrt3));
        assert_eq!(s6.mul(&s6), Poly::constant(rat(6)));
    }

    #[test]
    fn exact_division_detects_non_divisibility() {
        let a = p(Var::P1).add(&p(Var::Mass));
        let b = p(Var::P1).sub(&p(Var::Mass));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.add(&Poly::one()).div_exact(&a), None);
        assert_eq!(Poly::zero().div_exact(&a), Some(Poly::zero()));
    }

    #[test]
    fn display_is_readable() {
        let e = p(Var::P1).scale(&rat_frac(3, 2)).sub(&p(Var::Mass).mul(&p(Var::I)));
        assert_eq!(e.to_string(), "-i*m + 3/2*P1");
    }
}
