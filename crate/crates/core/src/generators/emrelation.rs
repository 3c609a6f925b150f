use super::{
    check_table, cross, dot, foldy_like, foldy_n, p_vec, s_vec, vec_lmul, GeneratorError, ReportEntry, TableKind,
    VerificationReport,
};
use crate::algebra::{OperatorExpr, ScalarCoeff, SectorMode};

/// The constant `c` with `H² − P² = c`, if it is one.
fn mass_shell_constant(h: &OperatorExpr) -> (OperatorExpr, Option<ScalarCoeff>) {
    let c = h.mul(h).sub(&dot(&p_vec(), &p_vec()));
    let constant = c.as_scalar().filter(|x| !x.depends_on_momentum());
    (c, constant)
}

/// Rebuilds the Foldy generators around `candidate` and runs the Poincaré
/// table. When `H² − P² = μ²` the spin part is `N = Λ S×P/(ΛH + μ)`; otherwise
/// the standard `N` is kept.
pub fn energy_momentum_constraint_check(candidate: &OperatorExpr) -> Result<VerificationReport, GeneratorError> {
    if candidate.contains_q() {
        return Err(GeneratorError::Rejected(format!(
            "`{candidate}` contains Q; the construction needs a translation-invariant H"
        )));
    }
    if candidate.contains_s() {
        return Err(GeneratorError::Rejected(format!("`{candidate}` contains S")));
    }
    let (c, constant) = mass_shell_constant(candidate);
    let mu = constant.as_ref().and_then(ScalarCoeff::sqrt_exact);
    let n = match &mu {
        Some(mu) => {
            let lam = OperatorExpr::lam();
            let denom = lam.mul(candidate).add(&OperatorExpr::scalar(mu.clone()));
            let factor = lam.mul(&denom.inverse_central()?);
            vec_lmul(&factor, &cross(&s_vec(), &p_vec()))
        }
        None => foldy_n(),
    };
    let g = foldy_like(candidate, &n, SectorMode::Full);
    let shell = ReportEntry {
        id: "emrelation.mass_shell".into(),
        lhs: "H^2 - P.P".into(),
        expected: "a central constant".into(),
        residual: c.to_string(),
        pass: constant.is_some(),
        asserted: true,
        numeric_residual: None,
    };
    let mut report = VerificationReport::new("emrelation", vec![shell]);
    report.extend(check_table(&g, TableKind::Poincare)?);
    report.suite = "emrelation".into();
    if constant.is_some() && mu.is_none() {
        report
            .warnings
            .push("H^2 - P^2 is constant but has no exact square root; the standard N was used".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_expr;

    #[test]
    fn foldy_hamiltonian_passes() {
        let r = energy_momentum_constraint_check(&parse_expr("Lam*omega").unwrap()).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn shifted_hamiltonian_fails() {
        let r = energy_momentum_constraint_check(&parse_expr("Lam*omega + P1").unwrap()).unwrap();
        assert!(!r.all_pass());
        assert!(r.failures().any(|e| e.residual != "0"));
    }

    #[test]
    fn position_dependent_hamiltonian_is_rejected() {
        assert!(matches!(
            energy_momentum_constraint_check(&parse_expr("Lam*omega + Q1").unwrap()),
            Err(GeneratorError::Rejected(_))
        ));
    }
}
