//! Lattice field quantities against mode sums evaluated here.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use qps_core::fockfield::{expectation_suite, restricted_norm};
use qps_core::FockField;

fn dispersion(ns: usize, m: f64) -> Vec<f64> {
    (0..ns)
        .map(|k| (4.0 * (PI * k as f64 / ns as f64).sin().powi(2) + m * m).sqrt())
        .collect()
}

fn site(ns: usize, y: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(ns, Complex64::new(0.0, 0.0));
    v[y] = Complex64::new(1.0, 0.0);
    v
}

/// `(ω^{−1/2}δ_y)(x) = (1/Ns) Σ_k ω_k^{−1/2} cos(2πk(x − y)/Ns)`
fn smeared_site(ns: usize, m: f64, x: usize, y: usize) -> f64 {
    let w = dispersion(ns, m);
    (0..ns)
        .map(|k| w[k].powf(-0.5) * (2.0 * PI * k as f64 * (x as f64 - y as f64) / ns as f64).cos())
        .sum::<f64>()
        / ns as f64
}

#[test]
fn spectrum_is_the_lattice_dispersion() {
    for (ns, m) in [(4, 0.3), (8, 1.0), (6, 2.5)] {
        let f = FockField::new(ns, m, 2).unwrap();
        let mut got = f.omega_spectrum().to_vec();
        let mut want = dispersion(ns, m);
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn vacuum_fluctuation_is_a_mode_sum() {
    let (ns, m, hbar) = (8, 0.7, 1.0);
    let f = FockField::new(ns, m, 3).unwrap();
    let want = hbar / 2.0 * dispersion(ns, m).iter().map(|w| 1.0 / w).sum::<f64>() / ns as f64;
    let rows = expectation_suite(&f, &site(ns, 0)).unwrap().rows;
    for r in rows {
        assert!((r.vacuum_sq - want).abs() < 1e-12, "x = {}: {} vs {want}", r.x, r.vacuum_sq);
    }
}

#[test]
fn one_particle_excess_is_the_smeared_site() {
    let (ns, y) = (8, 3);
    for m in [0.5, 1.0, 2.0] {
        let f = FockField::new(ns, m, 3).unwrap();
        let suite = expectation_suite(&f, &site(ns, y)).unwrap();
        assert!(suite.report.all_pass());
        for r in suite.rows {
            let want = smeared_site(ns, m, r.x, y).powi(2);
            assert!((r.difference - want).abs() < 1e-10, "m = {m}, x = {}", r.x);
        }
    }
}

#[test]
fn fourier_mode_creates_a_single_quantum() {
    let ns = 6;
    let f = FockField::new(ns, 1.0, 2).unwrap();
    for k in 0..ns {
        let mode = DVector::from_fn(ns, |x, _| {
            Complex64::from_polar(1.0, 2.0 * PI * (k * x) as f64 / ns as f64) / (ns as f64).sqrt()
        });
        let v = f.creation(&mode).unwrap().apply(&f.vacuum());
        let mut occ = vec![0u8; ns];
        occ[k] = 1;
        let idx = f.index_of(&occ).unwrap();
        assert!((v[idx].norm() - 1.0).abs() < 1e-12, "mode {k}");
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn truncation_does_not_move_low_sectors() {
    let (ns, m) = (6, 1.2);
    let small = FockField::new(ns, m, 3).unwrap();
    let large = FockField::new(ns, m, 4).unwrap();
    let psi = DVector::from_fn(ns, |x, _| Complex64::new(1.0 + x as f64, 0.5 - x as f64));
    let a = expectation_suite(&small, &psi).unwrap().rows;
    let b = expectation_suite(&large, &psi).unwrap().rows;
    for (ra, rb) in a.iter().zip(&b) {
        assert!((ra.vacuum_sq - rb.vacuum_sq).abs() < 1e-12);
        assert!((ra.one_particle_sq - rb.one_particle_sq).abs() < 1e-12);
    }
    // Number operators agree on total number at most nmax − 2 of the smaller space.
    let n_small = small.number_op(&psi).unwrap();
    let n_large = large.number_op(&psi).unwrap();
    for col in small.sector_up_to(1) {
        let occ = small.occupation(col).to_vec();
        let other = large.index_of(&occ).unwrap();
        for row in small.sector_up_to(2) {
            let o_row = large.index_of(small.occupation(row)).unwrap();
            assert!((n_small.mat[(row, col)] - n_large.mat[(o_row, other)]).norm() < 1e-12);
        }
    }
}

#[test]
fn truncated_ladder_ccr_fails_only_at_the_cap() {
    let f = FockField::new(4, 1.0, 3).unwrap();
    let psi = site(4, 1);
    let (a, ad) = f.ladder(&psi).unwrap();
    let ccr = a.commutator(&ad);
    let mut defect = ccr.mat.clone();
    for i in 0..f.dim() {
        defect[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    assert!(restricted_norm(&defect, &f.safe_subspace()) < 1e-12);
    let top: Vec<usize> = (0..f.dim()).filter(|&i| f.total_number(i) == f.nmax).collect();
    assert!(restricted_norm(&defect, &top) > 0.1);
}
