//! Randomized laws of the normal-form engine.
//!
//! Expressions are drawn as surface text so the parser, the tree reduction
//! and the canonical algebra are exercised together.

use proptest::prelude::*;
use qps_core::algebra::parse_tree;
use qps_core::{
    eval_spin_matrices, normal_form, parse_expr, render_expr, scalar_derivative, OperatorExpr, SectorMode, Spin,
};

const CASES: u32 = 1000;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (1usize..=3).prop_map(|i| format!("Q{i}")),
        (1usize..=3).prop_map(|i| format!("P{i}")),
        (1usize..=3).prop_map(|i| format!("S{i}")),
        Just("Lam".to_string()),
        Just("omega".to_string()),
        Just("m".to_string()),
        Just("t".to_string()),
        Just("(omega + m)^(-1)".to_string()),
        (-3i64..=3).prop_map(|n| format!("({n})")),
    ]
}

/// Small trees: a leaf count of at most about six keeps Jacobi affordable.
fn text() -> impl Strategy<Value = String> {
    leaf().prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a})*({b})")),
        ]
    })
}

fn op() -> impl Strategy<Value = OperatorExpr> {
    text().prop_map(|s| parse_expr(&s).expect("generated text parses"))
}

/// Functions of the momenta only.
fn momentum_scalar() -> impl Strategy<Value = OperatorExpr> {
    let atom = prop_oneof![
        (1usize..=3).prop_map(|i| format!("P{i}")),
        Just("omega".to_string()),
        Just("m".to_string()),
        Just("(omega + m)^(-1)".to_string()),
        Just("omega^(-1)".to_string()),
        (1i64..=4).prop_map(|n| format!("({n})")),
    ];
    atom.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a})*({b})")),
        ]
    })
    .prop_map(|s| parse_expr(&s).expect("generated text parses"))
}

fn sector() -> impl Strategy<Value = SectorMode> {
    prop_oneof![Just(SectorMode::Positive), Just(SectorMode::Negative)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn normal_form_is_idempotent(e in op()) {
        let again = parse_expr(&render_expr(&e)).expect("rendered form parses");
        prop_assert_eq!(again, e);
    }

    #[test]
    fn tree_reduction_is_associative(a in text(), b in text(), c in text()) {
        let left = normal_form(&parse_tree(&format!("(({a})*({b}))*({c})"), None).unwrap()).unwrap();
        let right = normal_form(&parse_tree(&format!("({a})*(({b})*({c}))"), None).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_distributes(a in op(), b in op(), c in op()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(b.add(&c).mul(&a), b.mul(&a).add(&c.mul(&a)));
    }

    #[test]
    fn commutator_is_antisymmetric(a in op(), b in op()) {
        prop_assert_eq!(a.commutator(&b), b.commutator(&a).neg());
        prop_assert!(a.commutator(&a).is_zero());
    }

    #[test]
    fn jacobi_identity(a in op(), b in op(), c in op()) {
        let sum = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(sum.is_zero(), "residual {}", sum);
    }

    #[test]
    fn commutator_is_a_derivation(a in op(), b in op(), c in op()) {
        let lhs = a.commutator(&b.mul(&c));
        let rhs = a.commutator(&b).mul(&c).add(&b.mul(&a.commutator(&c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn time_derivative_obeys_product_rule(a in op(), b in op(), h in op()) {
        let lhs = a.mul(&b).total_time_derivative(&h);
        let rhs = a.total_time_derivative(&h).mul(&b).add(&a.mul(&b.total_time_derivative(&h)));
        prop_assert_eq!(lhs, rhs);
    }

    /// `[Q_i, f(P)] = iħ ∂f/∂P_i`
    #[test]
    fn position_commutator_differentiates(f in momentum_scalar(), axis in 0usize..3) {
        let c = f.as_scalar().expect("momentum functions are scalar");
        let lhs = OperatorExpr::q(axis).commutator(&f);
        let rhs = OperatorExpr::i_hbar().mul(&OperatorExpr::scalar(scalar_derivative(&c, axis)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_derivative_obeys_product_rule(f in momentum_scalar(), g in momentum_scalar(), axis in 0usize..3) {
        let (f, g) = (f.as_scalar().unwrap(), g.as_scalar().unwrap());
        let lhs = scalar_derivative(&f.mul(&g), axis);
        let rhs = scalar_derivative(&f, axis).mul(&g).add(&f.mul(&scalar_derivative(&g, axis)));
        prop_assert!(lhs.sub(&rhs).is_zero(), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn sector_substitution_is_a_homomorphism(a in op(), b in op(), s in sector()) {
        prop_assert_eq!(a.mul(&b).sector(s), a.sector(s).mul(&b.sector(s)));
        prop_assert_eq!(a.add(&b).sector(s), a.sector(s).add(&b.sector(s)));
        prop_assert!(a.sector(s).sector(s) == a.sector(s));
        prop_assert!(!a.sector(s).contains_lam());
    }

    #[test]
    fn spin_matrices_are_a_homomorphism(a in op(), b in op(), twice in 1u32..=2) {
        let spin = Spin::from_twice(twice).unwrap();
        let lhs = eval_spin_matrices(&a.mul(&b), spin);
        let rhs = eval_spin_matrices(&a, spin).mul(&eval_spin_matrices(&b, spin));
        prop_assert!(lhs == rhs, "spin {}: {} * {}", spin, a, b);
    }

    #[test]
    fn adjoint_reverses_products(a in op(), b in op()) {
        prop_assert_eq!(a.mul(&b).adjoint(), b.adjoint().mul(&a.adjoint()));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }
}
