use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{restricted_norm, FockError, FockField, OneParticle, PhasePoint};
use crate::generators::{ReportEntry, VerificationReport};
use crate::tolerances::EXPECTATION;

fn random_point(rng: &mut ChaCha8Rng, ns: usize) -> PhasePoint {
    PhasePoint::new(
        DVector::from_fn(ns, |_, _| rng.random_range(-1.0..1.0)),
        DVector::from_fn(ns, |_, _| rng.random_range(-1.0..1.0)),
    )
}

fn random_state(rng: &mut ChaCha8Rng, ns: usize) -> OneParticle {
    let v = DVector::from_fn(ns, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

fn entry(id: &str, label: &str, value: f64) -> ReportEntry {
    ReportEntry::numeric(format!("fock.{id}"), label, value, EXPECTATION)
}

/// Phase-space and operator identities tying `Φ`, `a`, `a⁺`, `J`, `K` and
/// `Ω` together, on seeded random phase points and one-particle vectors.
/// Operator identities are measured on the subspace of total number
/// `≤ nmax − 1`.
pub fn duality_suite(field: &FockField, seed: u64) -> Result<VerificationReport, FockError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ns = field.ns;
    let hbar = field.hbar;
    let safe = field.safe_subspace();
    let all: Vec<usize> = (0..field.dim()).collect();
    let (z, w) = (random_point(&mut rng, ns), random_point(&mut rng, ns));
    let (psi, phi) = (random_state(&mut rng, ns), random_state(&mut rng, ns));
    let mut entries = Vec::new();

    let jz = field.complex_structure(&z);
    let kjz = field.one_particle(&jz);
    let ikz = field.one_particle(&z) * Complex64::new(0.0, 1.0);
    entries.push(entry("k_intertwines_j", "K(Jz) - iK(z)", (kjz - ikz).norm()));
    let jjz = field.complex_structure(&jz);
    entries.push(entry("j_squared", "J(Jz) + z", (&jjz.f + &z.f).norm() + (&jjz.g + &z.g).norm()));
    entries.push(entry(
        "omega_antisymmetric",
        "Omega(z, w) + Omega(w, z)",
        (field.symplectic(&z, &w) + field.symplectic(&w, &z)).abs(),
    ));
    let jw = field.complex_structure(&w);
    entries.push(entry(
        "omega_j_invariant",
        "Omega(Jz, Jw) - Omega(z, w)",
        (field.symplectic(&jz, &jw) - field.symplectic(&z, &w)).abs(),
    ));

    let (fz, fw) = (field.field_op(&z)?, field.field_op(&w)?);
    let ccr = fz.commutator(&fw).mat - identity(field.dim()) * Complex64::new(0.0, hbar * field.symplectic(&z, &w));
    entries.push(entry("field_ccr", "[Phi(z), Phi(w)] - i hbar Omega(z, w)", restricted_norm(&ccr, &safe)));

    let a_kz = field.annihilation(&field.one_particle(&z))?;
    let inverse = fz
        .scale(Complex64::new(0.0, 1.0))
        .sub(&field.field_op(&jz)?)
        .scale(Complex64::new(1.0 / (2.0 * hbar), 0.0));
    entries.push(entry(
        "inverse_identity",
        "a(Kz) - (i Phi(z) - Phi(Jz))/(2 hbar)",
        restricted_norm(&(a_kz.mat - inverse.mat), &all),
    ));

    let (a_psi, ad_psi) = field.ladder(&psi)?;
    let (a_phi, ad_phi) = field.ladder(&phi)?;
    let overlap = psi.dotc(&phi);
    let ccr_a = a_psi.commutator(&ad_phi).mat - identity(field.dim()) * overlap;
    entries.push(entry("ladder_ccr", "[a(psi), a+(phi)] - <psi, phi>", restricted_norm(&ccr_a, &safe)));
    entries.push(entry("ladder_commute", "[a(psi), a(phi)]", restricted_norm(&a_psi.commutator(&a_phi).mat, &all)));
    entries.push(entry("vacuum", "a(psi)|0>", a_psi.apply(&field.vacuum()).norm()));

    let n_psi = ad_psi.compose(&a_psi);
    let shift = (&n_psi.mat + identity(field.dim())) * &a_psi.mat - &a_psi.mat * &n_psi.mat;
    entries.push(entry("number_shift", "(N(psi) + 1) a(psi) - a(psi) N(psi)", restricted_norm(&shift, &safe)));

    let antilinear = field.annihilation(&(&psi * Complex64::new(0.0, 1.0)))?.mat - &a_psi.mat * Complex64::new(0.0, -1.0);
    entries.push(entry("antilinear", "a(i psi) + i a(psi)", restricted_norm(&antilinear, &all)));

    let mut grading = 0.0f64;
    for (r, c) in (0..field.dim()).flat_map(|r| (0..field.dim()).map(move |c| (r, c))) {
        if field.total_number(r) != field.total_number(c) + 1 {
            grading = grading.max(ad_psi.mat[(r, c)].norm());
        }
    }
    entries.push(entry("grading", "a+(psi) outside the n -> n+1 blocks", grading));

    let x = rng.random_range(0..ns);
    let (fx, px) = (field.local_field(x), field.local_momentum(x));
    entries.push(entry("field_self_adjoint", "phi(x) - phi(x)+", (&fx.mat - fx.mat.adjoint()).norm()));
    entries.push(entry("momentum_self_adjoint", "pi(x) - pi(x)+", (&px.mat - px.mat.adjoint()).norm()));
    let local_ccr = fx.commutator(&px).mat - identity(field.dim()) * Complex64::new(0.0, hbar);
    entries.push(entry("local_ccr", "[phi(x), pi(x)] - i hbar", restricted_norm(&local_ccr, &safe)));

    Ok(VerificationReport::new("fock_duality", entries))
}

/// Eigenvalues of `N(ψ)` for a normalized random `ψ`, and the kernel of the
/// total number operator.
pub fn spectrum_suite(field: &FockField, seed: u64) -> Result<VerificationReport, FockError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = random_state(&mut rng, field.ns);
    let n = field.number_op(&psi)?;
    let eig = n.mat.clone().symmetric_eigenvalues();
    let mut worst = 0.0f64;
    let mut seen = vec![false; field.nmax + 1];
    for &e in eig.iter() {
        let k = e.round();
        worst = worst.max((e - k).abs());
        if k < 0.0 || k as usize > field.nmax {
            worst = worst.max(1.0);
        } else {
            seen[k as usize] = true;
        }
    }
    let mut entries = vec![entry("number_spectrum_integers", "distance of the spectrum of N(psi) from {0..nmax}", worst)];
    let missing = seen.iter().filter(|s| !**s).count();
    entries.push(ReportEntry::numeric_with(
        "fock.number_spectrum_complete",
        "values of {0..nmax} missing from the spectrum of N(psi)",
        "0",
        missing as f64,
        missing == 0,
    ));
    let kernel = (0..field.dim()).filter(|i| field.total_number(*i) == 0).count();
    entries.push(ReportEntry::numeric_with(
        "fock.vacuum_unique",
        "dim ker (total number)",
        "1",
        kernel as f64,
        kernel == 1,
    ));
    Ok(VerificationReport::new("fock_spectrum", entries))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationRow {
    pub x: usize,
    pub vacuum_field: f64,
    pub vacuum_sq: f64,
    pub one_particle_field: f64,
    pub one_particle_sq: f64,
    pub difference: f64,
    /// `ħ|(ω^{−1/2}ψ)(x)|²`
    pub predicted: f64,
    /// `(ħ/2)‖ω^{−1/2}δ_x‖²`
    pub vacuum_predicted: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationSuite {
    pub report: VerificationReport,
    pub rows: Vec<ExpectationRow>,
}

impl ExpectationSuite {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,vacuum_sq,one_particle_sq,difference,predicted\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e}\n",
                r.x, r.vacuum_sq, r.one_particle_sq, r.difference, r.predicted
            ));
        }
        out
    }
}

/// Field expectation values in the vacuum and in the one-particle state
/// `a⁺(ψ)|0⟩` at every site, checked against the closed forms.
pub fn expectation_suite(field: &FockField, psi: &OneParticle) -> Result<ExpectationSuite, FockError> {
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(FockError::ZeroVector);
    }
    let psi = psi / Complex64::new(norm, 0.0);
    let vac = field.vacuum();
    let one = field.creation(&psi)?.apply(&vac);
    let smeared = field.omega_neg_half().map(|x| Complex64::new(x, 0.0)) * &psi;
    let hbar = field.hbar;
    let mut rows = Vec::with_capacity(field.ns);
    let mut entries = Vec::new();
    for x in 0..field.ns {
        let phi = field.local_field(x);
        let phi2 = phi.compose(&phi);
        let kernel_sq: f64 = field.omega_neg_half().column(x).iter().map(|v| v * v).sum();
        let row = ExpectationRow {
            x,
            vacuum_field: phi.expectation(&vac).norm(),
            vacuum_sq: phi2.expectation(&vac).re,
            one_particle_field: phi.expectation(&one).norm(),
            one_particle_sq: phi2.expectation(&one).re,
            difference: phi2.expectation(&one).re - phi2.expectation(&vac).re,
            predicted: hbar * smeared[x].norm_sqr(),
            vacuum_predicted: hbar / 2.0 * kernel_sq,
        };
        entries.push(entry(&format!("vacuum_field.x{x}"), "<0|phi(x)|0>", row.vacuum_field));
        entries.push(entry(&format!("one_particle_field.x{x}"), "<1|phi(x)|1>", row.one_particle_field));
        entries.push(entry(
            &format!("vacuum_sq.x{x}"),
            "<0|phi(x)^2|0> - (hbar/2)|omega^(-1/2) delta_x|^2",
            (row.vacuum_sq - row.vacuum_predicted).abs(),
        ));
        entries.push(entry(
            &format!("difference.x{x}"),
            "<1|phi(x)^2|1> - <0|phi(x)^2|0> - hbar|(omega^(-1/2) psi)(x)|^2",
            (row.difference - row.predicted).abs(),
        ));
        rows.push(row);
    }
    Ok(ExpectationSuite {
        report: VerificationReport::new("fock_expectation", entries),
        rows,
    })
}

/// Full width at half maximum of a periodic profile peaked at site `y`,
/// with linear interpolation between sites.
pub fn fwhm(profile: &[f64], y: usize) -> f64 {
    let n = profile.len();
    let half = profile[y] / 2.0;
    let side = |dir: isize| -> f64 {
        let mut prev = profile[y];
        for step in 1..=n / 2 {
            let idx = (y as isize + dir * step as isize).rem_euclid(n as isize) as usize;
            let cur = profile[idx];
            if cur <= half {
                return (step - 1) as f64 + (prev - half) / (prev - cur);
            }
            prev = cur;
        }
        (n / 2) as f64
    };
    side(1) + side(-1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwhm_of_triangle() {
        let p = [0.0, 0.0, 0.5, 1.0, 0.5, 0.0, 0.0, 0.0];
        assert!((fwhm(&p, 3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_field_passes_everything() {
        let f = FockField::new(5, 1.3, 2).unwrap();
        assert!(duality_suite(&f, 4).unwrap().all_pass());
        assert!(spectrum_suite(&f, 4).unwrap().all_pass());
        let mut psi = DVector::zeros(5);
        psi[2] = Complex64::new(1.0, 0.0);
        let e = expectation_suite(&f, &psi).unwrap();
        assert!(e.report.all_pass(), "{:?}", e.report.failures().collect::<Vec<_>>());
    }
}
