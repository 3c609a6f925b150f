//! Free scalar field on a periodic 1D lattice (spacing 1), realized on the
//! Fock space truncated at total particle number `nmax`.
//!
//! The one-particle space is `C^Ns` with the inner product antilinear in its
//! first argument. Phase points `z = (f, g)` enter through the complex
//! structure `J(f, g) = (−ω⁻¹g, ωf)` and the one-particle map
//! `K(f, g) = (ω^{1/2}f + iω^{−1/2}g)/√(2ħ)`, with `ω² = −∇² + m²`.

mod suites;

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub use suites::{duality_suite, expectation_suite, fwhm, spectrum_suite, ExpectationRow, ExpectationSuite};

#[derive(Debug, Error)]
pub enum FockError {
    #[error("invalid field configuration: {0}")]
    Config(String),
    #[error("the one-particle vector must be nonzero")]
    ZeroVector,
}

pub type OneParticle = DVector<Complex64>;

/// A classical configuration `(f, g)` of field and momentum.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub f: DVector<f64>,
    pub g: DVector<f64>,
}

impl PhasePoint {
    pub fn new(f: DVector<f64>, g: DVector<f64>) -> Self {
        assert_eq!(f.len(), g.len(), "f and g live on the same lattice");
        PhasePoint { f, g }
    }

    pub fn zero(ns: usize) -> Self {
        PhasePoint::new(DVector::zeros(ns), DVector::zeros(ns))
    }

    /// `(δ_x, 0)` when `field` is true, `(0, δ_x)` otherwise.
    pub fn delta(ns: usize, x: usize, field: bool) -> Self {
        let mut p = PhasePoint::zero(ns);
        if field {
            p.f[x] = 1.0;
        } else {
            p.g[x] = 1.0;
        }
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        PhasePoint::new(&self.f + &o.f, &self.g + &o.g)
    }

    pub fn scale(&self, k: f64) -> Self {
        PhasePoint::new(&self.f * k, &self.g * k)
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().chain(self.g.iter()).all(|x| *x == 0.0)
    }
}

/// An operator on the truncated Fock space, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    pub mat: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.mat * v
    }

    pub fn adjoint(&self) -> Self {
        FockOperator { mat: self.mat.adjoint() }
    }

    pub fn compose(&self, o: &Self) -> Self {
        FockOperator { mat: &self.mat * &o.mat }
    }

    pub fn add(&self, o: &Self) -> Self {
        FockOperator { mat: &self.mat + &o.mat }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FockOperator { mat: &self.mat - &o.mat }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        FockOperator { mat: &self.mat * k }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        FockOperator {
            mat: &self.mat * &o.mat - &o.mat * &self.mat,
        }
    }

    /// `⟨v|A|v⟩`
    pub fn expectation(&self, v: &DVector<Complex64>) -> Complex64 {
        v.dotc(&(&self.mat * v))
    }
}

/// Largest Fock dimension built densely.
pub const MAX_DIM: usize = 2500;

#[derive(Clone, Debug)]
pub struct FockField {
    pub ns: usize,
    pub mass: f64,
    pub nmax: usize,
    pub hbar: f64,
    omega_k: Vec<f64>,
    omega: DMatrix<f64>,
    omega_inv: DMatrix<f64>,
    omega_half: DMatrix<f64>,
    omega_neg_half: DMatrix<f64>,
    basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// `a_k` for the Fourier modes `e_k(x) = exp(2πikx/Ns)/√Ns`.
    lowering: Vec<DMatrix<Complex64>>,
}

fn occupations(ns: usize, nmax: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; ns];
    fn rec(k: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for n in 0..=left {
            cur[k] = n as u8;
            rec(k + 1, left - n, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, nmax, &mut cur, &mut out);
    out.sort_by_key(|n| (n.iter().map(|x| *x as usize).sum::<usize>(), std::cmp::Reverse(n.clone())));
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl FockField {
    /// Lattice field with `ns` sites, mass `m` and truncation `nmax`, at `ħ = 1`.
    pub fn new(ns: usize, mass: f64, nmax: usize) -> Result<Self, FockError> {
        FockField::with_hbar(ns, mass, nmax, 1.0)
    }

    pub fn with_hbar(ns: usize, mass: f64, nmax: usize, hbar: f64) -> Result<Self, FockError> {
        if ns < 4 {
            return Err(FockError::Config(format!("need at least 4 sites, got {ns}")));
        }
        if nmax < 2 {
            return Err(FockError::Config(format!(
                "nmax = {nmax}; the duality and expectation checks need the 2-particle sector"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) || !(hbar.is_finite() && hbar > 0.0) {
            return Err(FockError::Config("mass and hbar must be positive".into()));
        }
        let dim = binomial(ns + nmax, nmax);
        if dim > MAX_DIM {
            return Err(FockError::Config(format!("Fock dimension {dim} exceeds {MAX_DIM}")));
        }
        let omega_k: Vec<f64> = (0..ns)
            .map(|k| (4.0 * (PI * k as f64 / ns as f64).sin().powi(2) + mass * mass).sqrt())
            .collect();
        let spectral = |f: &dyn Fn(f64) -> f64| -> DMatrix<f64> {
            DMatrix::from_fn(ns, ns, |x, y| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, w) in omega_k.iter().enumerate() {
                    let phase = 2.0 * PI * (k as f64) * (x as f64 - y as f64) / ns as f64;
                    acc += Complex64::from_polar(f(*w), phase);
                }
                acc.re / ns as f64
            })
        };
        let omega = spectral(&|w| w);
        let omega_inv = spectral(&|w| 1.0 / w);
        let omega_half = spectral(&|w| w.sqrt());
        let omega_neg_half = spectral(&|w| 1.0 / w.sqrt());

        let basis = occupations(ns, nmax);
        let index: HashMap<Vec<u8>, usize> = basis.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let lowering = (0..ns)
            .map(|k| {
                let mut a = DMatrix::zeros(basis.len(), basis.len());
                for (col, n) in basis.iter().enumerate() {
                    if n[k] > 0 {
                        let mut m = n.clone();
                        m[k] -= 1;
                        a[(index[&m], col)] = Complex64::new((n[k] as f64).sqrt(), 0.0);
                    }
                }
                a
            })
            .collect();
        Ok(FockField {
            ns,
            mass,
            nmax,
            hbar,
            omega_k,
            omega,
            omega_inv,
            omega_half,
            omega_neg_half,
            basis,
            index,
            lowering,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Spectrum of `ω` on the lattice Fourier modes.
    pub fn omega_spectrum(&self) -> &[f64] {
        &self.omega_k
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn omega_neg_half(&self) -> &DMatrix<f64> {
        &self.omega_neg_half
    }

    /// Occupation numbers of basis state `i`, in the Fourier mode basis.
    pub fn occupation(&self, i: usize) -> &[u8] {
        &self.basis[i]
    }

    pub fn total_number(&self, i: usize) -> usize {
        self.basis[i].iter().map(|x| *x as usize).sum()
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index[&vec![0u8; self.ns]]] = Complex64::new(1.0, 0.0);
        v
    }

    /// Basis indices with total number at most `n`.
    pub fn sector_up_to(&self, n: usize) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.total_number(*i) <= n).collect()
    }

    /// The subspace on which every asserted identity is exact.
    pub fn safe_subspace(&self) -> Vec<usize> {
        self.sector_up_to(self.nmax - 1)
    }

    /// `Ω((f,g),(f′,g′)) = Σ_x (f g′ − f′ g)`
    pub fn symplectic(&self, z: &PhasePoint, w: &PhasePoint) -> f64 {
        z.f.dot(&w.g) - w.f.dot(&z.g)
    }

    /// `J(f, g) = (−ω⁻¹g, ωf)`
    pub fn complex_structure(&self, z: &PhasePoint) -> PhasePoint {
        PhasePoint::new(-(&self.omega_inv * &z.g), &self.omega * &z.f)
    }

    /// `K(f, g) = (ω^{1/2}f + iω^{−1/2}g)/√(2ħ)`
    pub fn one_particle(&self, z: &PhasePoint) -> OneParticle {
        let re = &self.omega_half * &z.f;
        let im = &self.omega_neg_half * &z.g;
        let k = 1.0 / (2.0 * self.hbar).sqrt();
        DVector::from_fn(self.ns, |x, _| Complex64::new(re[x], im[x]) * k)
    }

    /// `⟨e_k, ψ⟩` for the Fourier modes.
    fn mode_amplitudes(&self, psi: &OneParticle) -> Vec<Complex64> {
        let n = self.ns as f64;
        (0..self.ns)
            .map(|k| {
                (0..self.ns)
                    .map(|x| Complex64::from_polar(1.0 / n.sqrt(), -2.0 * PI * (k * x) as f64 / n) * psi[x])
                    .sum()
            })
            .collect()
    }

    /// `a(ψ) = Σ_k conj⟨e_k, ψ⟩ a_k`, antilinear in `ψ`.
    pub fn annihilation(&self, psi: &OneParticle) -> Result<FockOperator, FockError> {
        if psi.iter().all(|z| z.norm() == 0.0) {
            return Err(FockError::ZeroVector);
        }
        let mut mat = DMatrix::zeros(self.dim(), self.dim());
        for (c, a) in self.mode_amplitudes(psi).iter().zip(&self.lowering) {
            if c.norm() != 0.0 {
                mat += a * c.conj();
            }
        }
        Ok(FockOperator { mat })
    }

    /// `a⁺(ψ) = a(ψ)†`, which vanishes on the top sector.
    pub fn creation(&self, psi: &OneParticle) -> Result<FockOperator, FockError> {
        Ok(self.annihilation(psi)?.adjoint())
    }

    /// `(a(ψ), a⁺(ψ))`
    pub fn ladder(&self, psi: &OneParticle) -> Result<(FockOperator, FockOperator), FockError> {
        let a = self.annihilation(psi)?;
        let ad = a.adjoint();
        Ok((a, ad))
    }

    /// `N(ψ) = a⁺(ψ)a(ψ)`
    pub fn number_op(&self, psi: &OneParticle) -> Result<FockOperator, FockError> {
        let (a, ad) = self.ladder(psi)?;
        Ok(ad.compose(&a))
    }

    /// Diagonal total number operator `Σ_k N(e_k)`.
    pub fn total_number_op(&self) -> FockOperator {
        let d = DVector::from_fn(self.dim(), |i, _| Complex64::new(self.total_number(i) as f64, 0.0));
        FockOperator {
            mat: DMatrix::from_diagonal(&d),
        }
    }

    /// `Φ(z) = −iħ(a(Kz) − a⁺(Kz))`
    pub fn field_op(&self, z: &PhasePoint) -> Result<FockOperator, FockError> {
        let (a, ad) = self.ladder(&self.one_particle(z))?;
        Ok(a.sub(&ad).scale(Complex64::new(0.0, -self.hbar)))
    }

    /// `φ̂(x) = Φ(0, −δ_x)`
    pub fn local_field(&self, x: usize) -> FockOperator {
        self.field_op(&PhasePoint::delta(self.ns, x, false).scale(-1.0))
            .expect("δ_x is nonzero")
    }

    /// `π̂(x) = Φ(δ_x, 0)`
    pub fn local_momentum(&self, x: usize) -> FockOperator {
        self.field_op(&PhasePoint::delta(self.ns, x, true)).expect("δ_x is nonzero")
    }
}

/// Frobenius norm of `m` restricted to the columns in `cols`.
pub fn restricted_norm(m: &DMatrix<Complex64>, cols: &[usize]) -> f64 {
    cols.iter()
        .map(|&c| m.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}
