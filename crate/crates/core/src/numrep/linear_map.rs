use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{GridRep, NumError, State};
use crate::algebra::{Atom, Expr, OperatorExpr, Poly, ScalarCoeff, Symbol, TermKey, Var};

/// A polynomial flattened to `f64` coefficients for fast evaluation.
struct CompiledPoly {
    terms: Vec<(f64, [u8; crate::algebra::poly::NVARS])>,
}

impl CompiledPoly {
    fn new(p: &Poly) -> Self {
        CompiledPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| (c.to_f64().unwrap_or(f64::NAN), *m))
                .collect(),
        }
    }

    fn eval(&self, vals: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (c, m) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= vals[k].powi(e as i32);
                }
            }
            total += t;
        }
        total
    }
}

struct CompiledCoeff {
    num: CompiledPoly,
    den: Vec<(CompiledPoly, i32)>,
}

impl CompiledCoeff {
    fn new(c: &ScalarCoeff) -> Self {
        let den = Atom::ALL
            .iter()
            .zip(c.denominator())
            .filter(|(_, e)| **e > 0)
            .map(|(a, e)| (CompiledPoly::new(&a.poly()), *e as i32))
            .collect();
        CompiledCoeff {
            num: CompiledPoly::new(c.numerator()),
            den,
        }
    }

    fn eval(&self, vals: &[Complex64]) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for (p, e) in &self.den {
            d *= p.eval(vals).powi(*e);
        }
        self.num.eval(vals) / d
    }
}

enum CoeffGrid {
    Const(Complex64),
    Grid(Vec<Complex64>),
}

impl CoeffGrid {
    #[inline]
    fn at(&self, g: usize) -> Complex64 {
        match self {
            CoeffGrid::Const(c) => *c,
            CoeffGrid::Grid(v) => v[g],
        }
    }
}

struct RealTerm {
    q: [u8; 3],
    spin: Option<DMatrix<Complex64>>,
    lam: bool,
    coeff: CoeffGrid,
}

/// A normal-form expression evaluated on a grid, term by term.
pub struct Realized {
    grid: Arc<GridRep>,
    terms: Vec<RealTerm>,
}

fn var_values(grid: &GridRep, g: usize) -> Vec<Complex64> {
    let pt = crate::algebra::Point {
        p: grid.momentum_at(g),
        mass: grid.mass,
        time: grid.time,
        hbar: grid.hbar,
        mass_b: f64::NAN,
        e0: f64::NAN,
    };
    Var::ALL.iter().map(|v| pt.value(*v)).collect()
}

fn check_supported(key: &TermKey, c: &ScalarCoeff, d: usize) -> Result<(), NumError> {
    for (v, name) in [(Var::Omega2m, "omega2m"), (Var::MassB, "M"), (Var::E0, "E0")] {
        if c.depends_on(v) {
            return Err(NumError::UnsupportedSymbol(name.into()));
        }
    }
    if d == 1 {
        for axis in 1..3 {
            if key.q[axis] > 0 {
                return Err(NumError::UnsupportedSymbol(format!("Q{}", axis + 1)));
            }
        }
        // Axis-1 expressions depend on P2, P3 only through P², so their
        // coefficients are invariant under rotations about axis 1.
        let p2 = ScalarCoeff::momentum(1);
        let p3 = ScalarCoeff::momentum(2);
        let rot = p3.mul(&c.partial_momentum(1)).sub(&p2.mul(&c.partial_momentum(2)));
        if !rot.is_zero() {
            let axis = if c.depends_on(Var::P2) { "P2" } else { "P3" };
            return Err(NumError::UnsupportedSymbol(axis.into()));
        }
    }
    Ok(())
}

fn spin_product(mats: &[DMatrix<Complex64>; 3], s: &[u8; 3], dim: usize) -> Option<DMatrix<Complex64>> {
    if s.iter().all(|e| *e == 0) {
        return None;
    }
    let mut out = DMatrix::identity(dim, dim);
    for (axis, &e) in s.iter().enumerate() {
        for _ in 0..e {
            out = &out * &mats[axis];
        }
    }
    Some(out)
}

impl Realized {
    fn new(e: &OperatorExpr, grid: Arc<GridRep>) -> Result<Self, NumError> {
        let mats = grid.spin.numeric_matrices(grid.hbar);
        let dim = grid.spin_dim();
        let n = grid.grid_len();
        let mut terms = Vec::with_capacity(e.len());
        for (key, c) in e.terms() {
            check_supported(key, c, grid.d)?;
            let compiled = CompiledCoeff::new(c);
            let coeff = if c.depends_on_momentum() {
                CoeffGrid::Grid((0..n).into_par_iter().map(|g| compiled.eval(&var_values(&grid, g))).collect())
            } else {
                CoeffGrid::Const(compiled.eval(&var_values(&grid, 0)))
            };
            terms.push(RealTerm {
                q: key.q,
                spin: spin_product(&mats, &key.s, dim),
                lam: key.lam,
                coeff,
            });
        }
        Ok(Realized { grid, terms })
    }

    fn apply_q_powers(&self, q: [u8; 3], v: &mut [Complex64]) {
        for (axis, &e) in q.iter().enumerate() {
            for _ in 0..e {
                self.grid.apply_q(axis, v);
            }
        }
    }

    fn apply(&self, psi: &[Complex64]) -> State {
        let grid = &self.grid;
        let (n, dim) = (grid.grid_len(), grid.spin_dim());
        let mut out = grid.zeros();
        let mut cache: HashMap<[u8; 3], State> = HashMap::new();
        for term in &self.terms {
            if term.q != [0; 3] && !cache.contains_key(&term.q) {
                let mut v = psi.to_vec();
                self.apply_q_powers(term.q, &mut v);
                cache.insert(term.q, v);
            }
            let base: &[Complex64] = if term.q == [0; 3] { psi } else { &cache[&term.q] };
            for sector in 0..2 {
                let sign = if term.lam && sector == 1 { -1.0 } else { 1.0 };
                for r in 0..dim {
                    let ob = (sector * dim + r) * n;
                    match &term.spin {
                        None => {
                            let ib = ob;
                            for g in 0..n {
                                out[ob + g] += term.coeff.at(g) * base[ib + g] * sign;
                            }
                        }
                        Some(m) => {
                            for c in 0..dim {
                                let w = m[(r, c)] * sign;
                                if w == Complex64::new(0.0, 0.0) {
                                    continue;
                                }
                                let ib = (sector * dim + c) * n;
                                for g in 0..n {
                                    out[ob + g] += term.coeff.at(g) * base[ib + g] * w;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `(c Q^a S^b Λ)† = Λ (S^b)† Q^a c̄`
    fn apply_adjoint(&self, psi: &[Complex64]) -> State {
        let grid = &self.grid;
        let (n, dim) = (grid.grid_len(), grid.spin_dim());
        let mut out = grid.zeros();
        for term in &self.terms {
            let mut v: State = psi
                .iter()
                .enumerate()
                .map(|(idx, x)| term.coeff.at(idx % n).conj() * x)
                .collect();
            self.apply_q_powers(term.q, &mut v);
            for sector in 0..2 {
                let sign = if term.lam && sector == 1 { -1.0 } else { 1.0 };
                for r in 0..dim {
                    let ob = (sector * dim + r) * n;
                    match &term.spin {
                        None => {
                            for g in 0..n {
                                out[ob + g] += v[ob + g] * sign;
                            }
                        }
                        Some(m) => {
                            for c in 0..dim {
                                let w = m[(c, r)].conj() * sign;
                                if w == Complex64::new(0.0, 0.0) {
                                    continue;
                                }
                                let ib = (sector * dim + c) * n;
                                for g in 0..n {
                                    out[ob + g] += v[ib + g] * w;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A linear operator on grid states, kept as a tree of realized pieces so
/// that products are composed numerically rather than normal-ordered.
#[derive(Clone)]
pub enum LinearMap {
    /// Multiple of the identity.
    Scalar(Complex64),
    Realized(Arc<Realized>),
    Sum(Vec<(Complex64, LinearMap)>),
    /// `Compose(a, b)` applies `b` first.
    Compose(Box<LinearMap>, Box<LinearMap>),
    Adjoint(Box<LinearMap>),
}

fn axpy(acc: &mut [Complex64], k: Complex64, v: &[Complex64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += k * x;
    }
}

impl LinearMap {
    pub fn compose(a: LinearMap, b: LinearMap) -> LinearMap {
        LinearMap::Compose(Box::new(a), Box::new(b))
    }

    pub fn sum(parts: Vec<(Complex64, LinearMap)>) -> LinearMap {
        LinearMap::Sum(parts)
    }

    pub fn sub(a: LinearMap, b: LinearMap) -> LinearMap {
        let one = Complex64::new(1.0, 0.0);
        LinearMap::Sum(vec![(one, a), (-one, b)])
    }

    pub fn scale(self, k: Complex64) -> LinearMap {
        LinearMap::Sum(vec![(k, self)])
    }

    /// `a∘b − b∘a`
    pub fn commutator(a: &LinearMap, b: &LinearMap) -> LinearMap {
        LinearMap::sub(
            LinearMap::compose(a.clone(), b.clone()),
            LinearMap::compose(b.clone(), a.clone()),
        )
    }

    pub fn adjoint(self) -> LinearMap {
        LinearMap::Adjoint(Box::new(self))
    }

    pub fn apply(&self, psi: &[Complex64]) -> State {
        match self {
            LinearMap::Scalar(k) => psi.iter().map(|x| k * x).collect(),
            LinearMap::Realized(r) => r.apply(psi),
            LinearMap::Sum(parts) => {
                let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
                for (k, m) in parts {
                    axpy(&mut out, *k, &m.apply(psi));
                }
                out
            }
            LinearMap::Compose(a, b) => a.apply(&b.apply(psi)),
            LinearMap::Adjoint(a) => a.apply_adjoint(psi),
        }
    }

    pub fn apply_adjoint(&self, psi: &[Complex64]) -> State {
        match self {
            LinearMap::Scalar(k) => psi.iter().map(|x| k.conj() * x).collect(),
            LinearMap::Realized(r) => r.apply_adjoint(psi),
            LinearMap::Sum(parts) => {
                let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
                for (k, m) in parts {
                    axpy(&mut out, k.conj(), &m.apply_adjoint(psi));
                }
                out
            }
            LinearMap::Compose(a, b) => b.apply_adjoint(&a.apply_adjoint(psi)),
            LinearMap::Adjoint(a) => a.apply(psi),
        }
    }
}

/// Realizes a normal-form expression. Fails on symbols without a grid
/// meaning (`omega2m`, `M`, `E0`) and, when `d = 1`, on axis 2 and 3.
pub fn realize(e: &OperatorExpr, grid: &GridRep) -> Result<LinearMap, NumError> {
    Ok(LinearMap::Realized(Arc::new(Realized::new(e, Arc::new(grid.clone()))?)))
}

fn realize_in(e: &OperatorExpr, grid: &Arc<GridRep>) -> Result<LinearMap, NumError> {
    Ok(LinearMap::Realized(Arc::new(Realized::new(e, grid.clone())?)))
}

/// Realizes a tree structurally: products become compositions and brackets
/// become commutators of realized factors. Divisors and negative powers are
/// central and are realized from their normal form.
pub fn realize_tree(e: &Expr, grid: &GridRep) -> Result<LinearMap, NumError> {
    let grid = Arc::new(grid.clone());
    realize_tree_in(e, &grid)
}

fn realize_tree_in(e: &Expr, grid: &Arc<GridRep>) -> Result<LinearMap, NumError> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match e {
        Expr::Num(r) => LinearMap::Scalar(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)),
        Expr::Sym(Symbol::Scalar(Var::I)) => LinearMap::Scalar(Complex64::new(0.0, 1.0)),
        Expr::Sym(s) => realize_in(&s.to_operator(), grid)?,
        Expr::Bound(_, v) => realize_in(v, grid)?,
        Expr::Neg(a) => realize_tree_in(a, grid)?.scale(-one),
        Expr::Add(a, b) => LinearMap::Sum(vec![(one, realize_tree_in(a, grid)?), (one, realize_tree_in(b, grid)?)]),
        Expr::Sub(a, b) => LinearMap::sub(realize_tree_in(a, grid)?, realize_tree_in(b, grid)?),
        Expr::Mul(a, b) => LinearMap::compose(realize_tree_in(a, grid)?, realize_tree_in(b, grid)?),
        Expr::Div(a, b) => {
            let inv = crate::algebra::normal_form(b)?.inverse_central()?;
            LinearMap::compose(realize_tree_in(a, grid)?, realize_in(&inv, grid)?)
        }
        Expr::Pow(a, n) if *n >= 0 => {
            let base = realize_tree_in(a, grid)?;
            let mut acc = LinearMap::Scalar(one);
            for _ in 0..*n {
                acc = LinearMap::compose(base.clone(), acc);
            }
            acc
        }
        Expr::Pow(a, n) => {
            let inv = crate::algebra::normal_form(a)?.inverse_central()?;
            realize_in(&inv.pow(n.unsigned_abs() as u32), grid)?
        }
        Expr::Comm(a, b) => LinearMap::commutator(&realize_tree_in(a, grid)?, &realize_tree_in(b, grid)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expr, parse_tree, Spin};
    use crate::numrep::{gaussian_family, norm, SectorChoice};

    fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        let d: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        norm(&d) / norm(b).max(1e-300)
    }

    #[test]
    fn unsupported_symbols_are_refused() {
        let g = GridRep::new(1, 16, 3.0, 1.0, Spin::ZERO).unwrap();
        for text in ["omega2m", "M*P1", "E0", "Q2", "P3*Q1"] {
            let e = parse_expr(text).unwrap();
            assert!(matches!(realize(&e, &g), Err(NumError::UnsupportedSymbol(_))), "{text}");
        }
        assert!(realize(&parse_expr("omega*Q1 + S3*Lam").unwrap(), &g).is_ok());
    }

    #[test]
    fn normal_form_and_tree_agree() {
        let g = GridRep::new(1, 256, 10.0, 1.0, Spin::HALF).unwrap();
        let states = gaussian_family(7, 2, &g, Some(1.2), SectorChoice::Both);
        let text = "Q1*omega*P1 + S1*Q1*Lam*S2 - (omega + m)^(-1)*Q1^2";
        let tree = realize_tree(&parse_tree(text, None).unwrap(), &g).unwrap();
        let nf = realize(&parse_expr(text).unwrap(), &g).unwrap();
        for psi in &states {
            let r = rel_diff(&tree.apply(psi), &nf.apply(psi));
            assert!(r < 1e-10, "{r}");
        }
    }

    #[test]
    fn adjoint_matches_inner_product() {
        let g = GridRep::new(1, 64, 6.0, 1.0, Spin::ONE).unwrap();
        let states = gaussian_family(3, 2, &g, None, SectorChoice::Both);
        let a = realize(&parse_expr("i*omega*Q1*S1 + P1*Lam*S3 + Q1^2").unwrap(), &g).unwrap();
        let lhs = crate::numrep::inner(&states[0], &a.apply(&states[1]));
        let rhs = crate::numrep::inner(&a.apply_adjoint(&states[0]), &states[1]);
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn omega_spectrum_is_bounded() {
        let g = GridRep::new(3, 8, 2.0, 0.7, Spin::ZERO).unwrap();
        let lo = (0..g.grid_len()).map(|k| g.omega_at(k)).fold(f64::INFINITY, f64::min);
        let hi = (0..g.grid_len()).map(|k| g.omega_at(k)).fold(0.0, f64::max);
        assert!(lo >= 0.7 && hi <= (3.0f64 * 4.0 + 0.49).sqrt());
    }
}
