//! The spin sector: PBW normal ordering of `S1^a S2^b S3^c` words and the
//! standard finite-dimensional spin matrices.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::{rat, rat_frac, Poly, Rat, Var};
use super::scalar::ScalarCoeff;
use super::AlgebraError;

/// Exponents of `S1, S2, S3` in PBW order.
pub type SMono = [u8; 3];

/// A sum of PBW monomials with coefficients polynomial in `i` and `ħ`.
pub type SSum = Vec<(SMono, Poly)>;

/// Levi-Civita symbol on axes `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// The axis completing `i, j` to a permutation of `0, 1, 2`.
pub fn third_axis(i: usize, j: usize) -> usize {
    3 - i - j
}

thread_local! {
    static WORDS: RefCell<HashMap<Vec<u8>, Rc<SSum>>> = RefCell::new(HashMap::new());
    static PRODUCTS: RefCell<HashMap<(SMono, SMono), Rc<SSum>>> = RefCell::new(HashMap::new());
}

fn word_of(m: &SMono) -> Vec<u8> {
    let mut w = Vec::with_capacity(m.iter().map(|&e| e as usize).sum());
    for (axis, &e) in m.iter().enumerate() {
        w.extend(std::iter::repeat_n(axis as u8, e as usize));
    }
    w
}

fn accumulate(acc: &mut HashMap<SMono, Poly>, m: SMono, c: &Poly) {
    let e = acc.entry(m).or_insert_with(Poly::zero);
    *e = e.add(c);
}

fn finish(acc: HashMap<SMono, Poly>) -> SSum {
    let mut out: SSum = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_by_key(|a| a.0);
    out
}

/// Rewrites an arbitrary word in `S` to PBW order using
/// `S_j S_i = S_i S_j − iħ ε_ijk S_k` for `i < j`.
fn normalize_word(w: &[u8]) -> Rc<SSum> {
    if let Some(hit) = WORDS.with(|c| c.borrow().get(w).cloned()) {
        return hit;
    }
    let result = match w.windows(2).position(|p| p[0] > p[1]) {
        None => {
            let mut m = [0u8; 3];
            for &a in w {
                m[a as usize] += 1;
            }
            vec![(m, Poly::one())]
        }
        Some(pos) => {
            let (j, i) = (w[pos] as usize, w[pos + 1] as usize);
            let k = third_axis(i, j);
            let mut swapped = w.to_vec();
            swapped.swap(pos, pos + 1);
            let mut contracted = Vec::with_capacity(w.len() - 1);
            contracted.extend_from_slice(&w[..pos]);
            contracted.push(k as u8);
            contracted.extend_from_slice(&w[pos + 2..]);
            let factor = Poly::var(Var::I)
                .mul(&Poly::var(Var::Hbar))
                .scale(&rat(-levi_civita(i, j, k)));
            let mut acc = HashMap::new();
            for (m, c) in normalize_word(&swapped).iter() {
                accumulate(&mut acc, *m, c);
            }
            for (m, c) in normalize_word(&contracted).iter() {
                accumulate(&mut acc, *m, &c.mul(&factor));
            }
            finish(acc)
        }
    };
    let rc = Rc::new(result);
    WORDS.with(|c| c.borrow_mut().insert(w.to_vec(), rc.clone()));
    rc
}

/// PBW product of two ordered spin monomials.
pub fn smono_product(a: &SMono, b: &SMono) -> Rc<SSum> {
    let last_a = a.iter().rposition(|&e| e > 0);
    let first_b = b.iter().position(|&e| e > 0);
    if let (Some(la), Some(fb)) = (last_a, first_b) {
        if la > fb {
            return product_slow(a, b);
        }
    }
    Rc::new(vec![([a[0] + b[0], a[1] + b[1], a[2] + b[2]], Poly::one())])
}

fn product_slow(a: &SMono, b: &SMono) -> Rc<SSum> {
    if let Some(hit) = PRODUCTS.with(|c| c.borrow().get(&(*a, *b)).cloned()) {
        return hit;
    }
    let mut w = word_of(a);
    w.extend(word_of(b));
    let r = normalize_word(&w);
    PRODUCTS.with(|c| c.borrow_mut().insert((*a, *b), r.clone()));
    r
}

/// Spin quantum number `s`, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Spin(u8);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);
    pub const THREE_HALVES: Spin = Spin(3);
    pub const TWO: Spin = Spin(4);

    /// Spins supported by the matrix backend: `0, 1/2, 1, 3/2, 2`.
    pub fn from_twice(twice: u32) -> Result<Spin, AlgebraError> {
        if twice <= 4 {
            Ok(Spin(twice as u8))
        } else {
            Err(AlgebraError::UnsupportedSpin(format!("{}/2", twice)))
        }
    }

    pub fn from_f64(s: f64) -> Result<Spin, AlgebraError> {
        let twice = (2.0 * s).round();
        if (2.0 * s - twice).abs() > 1e-12 || !(0.0..=4.0).contains(&twice) {
            return Err(AlgebraError::UnsupportedSpin(s.to_string()));
        }
        Ok(Spin(twice as u8))
    }

    pub fn twice(self) -> u32 {
        self.0 as u32
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `s(s+1)`
    pub fn casimir(self) -> Rat {
        let n = self.0 as i64;
        rat_frac(n * (n + 2), 4)
    }

    /// `2m` for the basis states, ordered `m = s, s−1, …, −s`.
    fn twice_m(self) -> impl Iterator<Item = i64> {
        let n = self.0 as i64;
        (0..=n).map(move |k| n - 2 * k)
    }

    /// `4(s(s+1) − m(m+1))` for the raising matrix element from `m`.
    fn raise_sq4(self, twice_m: i64) -> i64 {
        let n = self.0 as i64;
        n * (n + 2) - twice_m * (twice_m + 2)
    }

    /// Exact spin matrices `[S1, S2, S3]` with entries in the coefficient ring.
    pub fn exact_matrices(self) -> [Vec<Vec<ScalarCoeff>>; 3] {
        let d = self.dim();
        let zero = || vec![vec![ScalarCoeff::zero(); d]; d];
        let (mut s1, mut s2, mut s3) = (zero(), zero(), zero());
        let hbar = ScalarCoeff::hbar();
        let tm: Vec<i64> = self.twice_m().collect();
        for (r, &m2) in tm.iter().enumerate() {
            s3[r][r] = hbar.mul(&ScalarCoeff::frac(m2, 2));
        }
        // Row r-1 has m one higher than row r.
        for r in 1..d {
            let q = self.raise_sq4(tm[r]);
            debug_assert_eq!(q % 4, 0);
            let amp = ScalarCoeff::from_poly(exact_sqrt_small(q / 4)).mul(&hbar);
            let half = amp.mul(&ScalarCoeff::frac(1, 2));
            let ihalf = half.mul(&ScalarCoeff::i());
            // S+ at (r-1, r), S- at (r, r-1); S1 = (S+ + S-)/2, S2 = (S+ - S-)/(2i).
            s1[r - 1][r] = half.clone();
            s1[r][r - 1] = half;
            s2[r - 1][r] = ihalf.neg();
            s2[r][r - 1] = ihalf;
        }
        [s1, s2, s3]
    }

    /// Numeric spin matrices at a given `ħ`.
    pub fn numeric_matrices(self, hbar: f64) -> [DMatrix<Complex64>; 3] {
        let d = self.dim();
        let mut s1 = DMatrix::zeros(d, d);
        let mut s2 = DMatrix::zeros(d, d);
        let mut s3 = DMatrix::zeros(d, d);
        let tm: Vec<i64> = self.twice_m().collect();
        for (r, &m2) in tm.iter().enumerate() {
            s3[(r, r)] = Complex64::new(hbar * m2 as f64 / 2.0, 0.0);
        }
        for r in 1..d {
            let amp = hbar * (self.raise_sq4(tm[r]) as f64).sqrt() / 2.0;
            s1[(r - 1, r)] = Complex64::new(amp / 2.0, 0.0);
            s1[(r, r - 1)] = Complex64::new(amp / 2.0, 0.0);
            s2[(r - 1, r)] = Complex64::new(0.0, -amp / 2.0);
            s2[(r, r - 1)] = Complex64::new(0.0, amp / 2.0);
        }
        [s1, s2, s3]
    }
}

impl TryFrom<f64> for Spin {
    type Error = AlgebraError;

    fn try_from(s: f64) -> Result<Self, Self::Error> {
        Spin::from_f64(s)
    }
}

impl From<Spin> for f64 {
    fn from(s: Spin) -> f64 {
        s.value()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `√n` for the radicands that occur in spin matrices up to `s = 2`.
fn exact_sqrt_small(n: i64) -> Poly {
    let s2 = Poly::var(Var::Sqrt2);
    let s3 = Poly::var(Var::Sqrt3);
    match n {
        0 => Poly::zero(),
        1 => Poly::one(),
        2 => s2,
        3 => s3,
        4 => Poly::constant(rat(2)),
        6 => s2.mul(&s3),
        _ => unreachable!("radicand {n} does not occur for s <= 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ih() -> Poly {
        Poly::var(Var::I).mul(&Poly::var(Var::Hbar))
    }

    #[test]
    fn s2_s1_reorders() {
        let r = smono_product(&[0, 1, 0], &[1, 0, 0]);
        let expect = vec![([0, 0, 1], ih().neg()), ([1, 1, 0], Poly::one())];
        assert_eq!(*r, expect);
    }

    #[test]
    fn ordered_product_is_concatenation() {
        let r = smono_product(&[1, 1, 0], &[0, 1, 2]);
        assert_eq!(*r, vec![([1, 2, 2], Poly::one())]);
    }

    #[test]
    fn numeric_matrices_satisfy_casimir() {
        for twice in 0..=4 {
            let s = Spin::from_twice(twice).unwrap();
            let [a, b, c] = s.numeric_matrices(1.0);
            let cas = &a * &a + &b * &b + &c * &c;
            let want = s.value() * (s.value() + 1.0);
            for r in 0..s.dim() {
                for col in 0..s.dim() {
                    let target = if r == col { want } else { 0.0 };
                    assert!((cas[(r, col)] - Complex64::new(target, 0.0)).norm() < 1e-12);
                }
            }
            // [S1, S2] = i S3
            let comm = &a * &b - &b * &a - &c * Complex64::i();
            assert!(comm.norm() < 1e-12);
        }
    }

    #[test]
    fn unsupported_spin_is_rejected() {
        assert!(Spin::from_twice(5).is_err());
        assert!(Spin::from_f64(0.3).is_err());
        assert_eq!(Spin::from_f64(1.5).unwrap(), Spin::THREE_HALVES);
    }
}
