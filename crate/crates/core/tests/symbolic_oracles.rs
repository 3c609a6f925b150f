//! Hand-derived relations, frozen renderings, error paths, and agreement
//! between the exact and floating-point spin backends.

use nalgebra::DMatrix;
use num_complex::Complex64;
use qps_core::algebra::{Point, SpinMatrix};
use qps_core::generators::{
    bargmann_generators, check_table, energy_momentum_constraint_check, foldy_generators, pauli_lubanski,
    GeneratorError, TableKind,
};
use qps_core::{eval_spin_matrices, parse_expr, parse_expr_with, render_expr, AlgebraError, OperatorExpr, SectorMode, Spin};

fn p(text: &str) -> OperatorExpr {
    parse_expr(text).unwrap()
}

#[test]
fn position_against_energy() {
    assert_eq!(p("Q1*omega - omega*Q1"), p("i*hbar*P1*omega^(-1)"));
    assert_eq!(p("Q2*P2^3 - P2^3*Q2"), p("3*i*hbar*P2^2"));
    assert_eq!(p("Q1*Q1*P1 - P1*Q1*Q1"), p("2*i*hbar*Q1"));
}

#[test]
fn foldy_boosts_close_on_rotations() {
    let g = foldy_generators(SectorMode::Full);
    let b = g.bindings();
    let kk = parse_expr_with("K1*K2 - K2*K1", &b).unwrap();
    assert_eq!(kk, p("-i*hbar*(Q1*P2 - Q2*P1 + S3)"));
    // Frozen canonical rendering.
    assert_eq!(render_expr(&kk), "-i*hbar*S3 + i*P1*hbar*Q2 - i*P2*hbar*Q1");
    assert_eq!(render_expr(&p("Q1*omega - omega*Q1")), "i*omega*P1*hbar/(omega^2)");
}

#[test]
fn bargmann_boosts_carry_the_mass() {
    let g = bargmann_generators();
    let b = g.bindings();
    assert_eq!(parse_expr_with("C1*P1 - P1*C1", &b).unwrap(), p("-i*hbar*M"));
    assert!(parse_expr_with("C1*P2 - P2*C1", &b).unwrap().is_zero());
    assert!(check_table(&g, TableKind::Bargmann).unwrap().all_pass());
}

#[test]
fn pauli_lubanski_fails_only_where_expected() {
    let r = pauli_lubanski(&foldy_generators(SectorMode::Full)).unwrap();
    assert!(r.all_pass());
    // The spin form of W is only asserted on the positive sector.
    assert!(r.entries.iter().filter(|e| e.id.starts_with("pl.spatial.negative")).all(|e| !e.asserted));
}

#[test]
fn parser_errors_are_typed() {
    assert!(matches!(parse_expr("Q4"), Err(AlgebraError::UnknownSymbol { .. })));
    assert!(matches!(parse_expr("(Q1 + P1"), Err(AlgebraError::Syntax { .. })));
    assert!(matches!(parse_expr("P1/Q1"), Err(AlgebraError::NotInvertible(_)) | Err(AlgebraError::Malformed(_))));
    assert!(matches!(Spin::from_f64(2.5), Err(AlgebraError::UnsupportedSpin(_))));
    assert!(Spin::from_f64(0.3).is_err());
}

#[test]
fn constraint_check_rejects_positions_and_spin() {
    for text in ["Lam*omega + Q2", "Lam*omega + S1"] {
        assert!(matches!(
            energy_momentum_constraint_check(&p(text)),
            Err(GeneratorError::Rejected(_))
        ));
    }
}

/// Spin matrices from `S± |m⟩ = ħ√(s(s+1) − m(m±1)) |m±1⟩`, ordered `m = s … −s`.
fn reference_spin(s: f64) -> [DMatrix<Complex64>; 3] {
    let d = (2.0 * s).round() as usize + 1;
    let m = |r: usize| s - r as f64;
    let mut plus = DMatrix::<Complex64>::zeros(d, d);
    for r in 1..d {
        plus[(r - 1, r)] = Complex64::new((s * (s + 1.0) - m(r) * (m(r) + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let s1 = (&plus + &minus) * Complex64::new(0.5, 0.0);
    let s2 = (&plus - &minus) / (i * 2.0);
    let s3 = DMatrix::from_fn(d, d, |r, c| if r == c { Complex64::new(m(r), 0.0) } else { Complex64::new(0.0, 0.0) });
    [s1, s2, s3]
}

fn to_numeric(m: &SpinMatrix) -> DMatrix<Complex64> {
    let pt = Point::new([0.3, -0.2, 0.7], 1.1);
    DMatrix::from_fn(m.dim(), m.dim(), |r, c| m.get(r, c).as_scalar().expect("spin-free entry").eval(&pt))
}

#[test]
fn spin_backends_agree() {
    for twice in 0..=4 {
        let spin = Spin::from_twice(twice).unwrap();
        let reference = reference_spin(spin.value());
        let numeric = spin.numeric_matrices(1.0);
        for a in 0..3 {
            let exact = to_numeric(&eval_spin_matrices(&OperatorExpr::s(a), spin));
            assert!((&exact - &reference[a]).norm() < 1e-14, "s = {spin}, axis {a}");
            assert!((&numeric[a] - &reference[a]).norm() < 1e-14, "s = {spin}, axis {a}");
        }
        let word = p("S1*S2*S3 + 2*S3^2 - S1*P2");
        let got = to_numeric(&eval_spin_matrices(&word, spin));
        let [s1, s2, s3] = &reference;
        let p2 = Complex64::new(-0.2, 0.0);
        let want = s1 * s2 * s3 + s3 * s3 * Complex64::new(2.0, 0.0) - s1 * p2;
        assert!((&got - &want).norm() < 1e-13, "s = {spin}");
    }
}

#[test]
fn spin_casimir_is_scalar() {
    for twice in 0..=4 {
        let spin = Spin::from_twice(twice).unwrap();
        let got = eval_spin_matrices(&p("S1^2 + S2^2 + S3^2"), spin);
        let s = spin.value();
        let want = SpinMatrix::diagonal(spin.dim(), &OperatorExpr::hbar().pow(2).mul(&p(&format!("{}/4", (2.0 * s * (2.0 * s + 2.0)) as i64))));
        assert!(got == want, "s = {spin}");
    }
}
