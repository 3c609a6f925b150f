use super::{
    cross, dot, p_vec, s_vec, vec3, vec_lmul, vec_rmul, vec_sub, GeneratorError, GeneratorSet, ReportEntry,
    VerificationReport,
};
use crate::algebra::{eval_spin_matrices, OperatorExpr, ScalarCoeff, SectorMode, Spin, SpinMatrix};

const SECTORS: [SectorMode; 2] = [SectorMode::Positive, SectorMode::Negative];

fn ten(g: &GeneratorSet) -> Result<Vec<(String, OperatorExpr)>, GeneratorError> {
    let mut out = vec![("H".to_string(), g.get("H")?.clone())];
    for prefix in ["P", "J", "K"] {
        for (i, e) in g.vector(prefix)?.into_iter().enumerate() {
            out.push((format!("{prefix}{}", i + 1), e));
        }
    }
    Ok(out)
}

fn s_squared() -> OperatorExpr {
    dot(&s_vec(), &s_vec())
}

/// `H² − P²` and `W0² − W·W`.
pub fn casimir_elements(g: &GeneratorSet) -> Result<(OperatorExpr, OperatorExpr), GeneratorError> {
    let h = g.get("H")?;
    let p = g.vector("P")?;
    let c1 = h.mul(h).sub(&dot(&p, &p));
    let w0 = g.get("W0")?;
    let w = g.vector("W")?;
    let c2 = w0.mul(w0).sub(&dot(&w, &w));
    Ok((c1, c2))
}

/// Both Casimirs: values, centrality against the ten generators, the
/// spin relation `C2 = −m²S²` per sector and its matrix form.
pub fn casimirs(g: &GeneratorSet) -> Result<VerificationReport, GeneratorError> {
    let (c1, c2) = casimir_elements(g)?;
    let m2 = OperatorExpr::mass().pow(2);
    let mut entries = vec![ReportEntry::symbolic("casimir.C1", "H^2 - P.P", &c1, &m2)];
    for (name, x) in ten(g)? {
        for (cname, c) in [("C1", &c1), ("C2", &c2)] {
            entries.push(ReportEntry::symbolic(
                format!("casimir.central.{cname}.{name}"),
                format!("[{cname}, {name}]"),
                &c.commutator(&x),
                &OperatorExpr::zero(),
            ));
        }
    }
    let target = m2.mul(&s_squared()).neg();
    for sector in SECTORS {
        entries.push(ReportEntry::symbolic(
            format!("casimir.C2.spin.{sector}"),
            format!("W0^2 - W.W on the {sector} sector"),
            &c2.sector(sector),
            &target.sector(sector),
        ));
    }
    for spin in [Spin::HALF, Spin::ONE] {
        let got = eval_spin_matrices(&c2.sector(SectorMode::Positive), spin);
        let cas = ScalarCoeff::from_rat(spin.casimir());
        let want = SpinMatrix::diagonal(spin.dim(), &m2.mul(&OperatorExpr::hbar().pow(2)).scale(&cas).neg());
        let residual = got.sub(&want);
        entries.push(ReportEntry {
            id: format!("casimir.C2.matrix.s={spin}"),
            lhs: format!("W0^2 - W.W at s = {spin}, positive sector"),
            expected: format!("{} * identity", want.get(0, 0)),
            residual: if residual.is_zero() { "0".into() } else { format!("{residual:?}") },
            pass: residual.is_zero(),
            asserted: true,
            numeric_residual: None,
        });
    }
    Ok(VerificationReport::new("casimirs", entries))
}

/// `HS − P×(S×P)/(H+m)`
fn spin_form_of_w(h: &OperatorExpr) -> Result<[OperatorExpr; 3], GeneratorError> {
    let (p, s) = (p_vec(), s_vec());
    let inv = h.add(&OperatorExpr::mass()).inverse_central()?;
    let tail = vec_rmul(&cross(&p, &cross(&s, &p)), &inv);
    Ok(vec_sub(&vec_lmul(h, &s), &tail))
}

/// Four-orthogonality of `W` and `P`, `W0 = S·P`, and the spin form of the
/// spatial part (asserted on the positive sector, recorded on the negative).
pub fn pauli_lubanski(g: &GeneratorSet) -> Result<VerificationReport, GeneratorError> {
    let h = g.get("H")?;
    let p = g.vector("P")?;
    let w0 = g.get("W0")?;
    let w = g.vector("W")?;
    let mut entries = vec![
        ReportEntry::symbolic("pl.orthogonal", "W0 H - W.P", &w0.mul(h).sub(&dot(&w, &p)), &OperatorExpr::zero()),
        ReportEntry::symbolic("pl.w0", "W0", w0, &dot(&s_vec(), &p_vec())),
    ];
    let form = spin_form_of_w(h)?;
    for sector in SECTORS {
        for i in 0..3 {
            let e = ReportEntry::symbolic(
                format!("pl.spatial.{sector}.W{}", i + 1),
                format!("W{} on the {sector} sector", i + 1),
                &w[i].sector(sector),
                &form[i].sector(sector),
            );
            entries.push(if sector == SectorMode::Positive { e } else { e.recorded() });
        }
    }
    Ok(VerificationReport::new("pauli_lubanski", entries))
}

/// Identities behind the boost-matrix construction of `N`, with `H = ω`.
pub fn boost_matrix_identities() -> Result<VerificationReport, GeneratorError> {
    let (p, s) = (p_vec(), s_vec());
    let h = OperatorExpr::omega();
    let m = OperatorExpr::mass();
    let inv_hm = h.add(&m).inverse_central()?;
    let p_sq = dot(&p, &p);
    let inv_p_sq = p_sq.inverse_central()?;
    let mut entries = Vec::new();

    for i in 0..3 {
        for j in 0..3 {
            let pp = p[i].mul(&p[j]);
            let lhs = h.sub(&m).mul(&pp).mul(&inv_p_sq);
            entries.push(ReportEntry::symbolic(
                format!("boost.matrix.{}{}", i + 1, j + 1),
                format!("(H - m) P{0} P{1} / P^2", i + 1, j + 1),
                &lhs,
                &pp.mul(&inv_hm),
            ));
        }
    }

    let s_dot_p = dot(&s, &p);
    let rhs = spin_form_of_w(&h)?;
    for i in 0..3 {
        let lhs = m.mul(&s[i]).add(&s_dot_p.mul(&p[i]).mul(&inv_hm));
        entries.push(ReportEntry::symbolic(
            format!("boost.w_rearrangement.{}", i + 1),
            format!("m S{0} + (S.P) P{0}/(H + m)", i + 1),
            &lhs,
            &rhs[i],
        ));
    }

    let p_x_ps = cross(&p, &cross(&p, &s));
    let expanded = vec_sub(&vec_rmul(&p, &dot(&p, &s)), &vec_lmul(&p_sq, &s));
    for i in 0..3 {
        entries.push(ReportEntry::symbolic(
            format!("boost.triple_product.{}", i + 1),
            format!("(P x (P x S)){}", i + 1),
            &p_x_ps[i],
            &expanded[i],
        ));
    }

    // With N.P = 0, P x (P x N) = -P^2 N, so N = -P x X / P^2.
    let x = vec_rmul(&cross(&p, &cross(&s, &p)), &inv_hm);
    let n_solved = vec3(|i| cross(&p, &x)[i].mul(&inv_p_sq).neg());
    let n_expected = vec_rmul(&cross(&s, &p), &inv_hm);
    for i in 0..3 {
        entries.push(ReportEntry::symbolic(
            format!("boost.n_determination.{}", i + 1),
            format!("N{} solved from P x N and N.P = 0", i + 1),
            &n_solved[i],
            &n_expected[i],
        ));
    }
    entries.push(ReportEntry::symbolic(
        "boost.n_perpendicular",
        "N.P",
        &dot(&n_solved, &p),
        &OperatorExpr::zero(),
    ));
    let back = cross(&p, &n_solved);
    for i in 0..3 {
        entries.push(ReportEntry::symbolic(
            format!("boost.n_consistent.{}", i + 1),
            format!("(P x N){}", i + 1),
            &back[i],
            &x[i],
        ));
    }
    Ok(VerificationReport::new("boost", entries))
}
