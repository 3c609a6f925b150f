use super::{cross, GeneratorError, GeneratorSet, ReportEntry, VerificationReport};
use crate::algebra::{levi_civita, OperatorExpr, ScalarCoeff, SectorMode};

struct Suite {
    entries: Vec<ReportEntry>,
}

impl Suite {
    fn eq(&mut self, id: String, label: String, lhs: &OperatorExpr, rhs: &OperatorExpr) {
        self.entries.push(ReportEntry::symbolic(id, label, lhs, rhs));
    }

    fn zero(&mut self, id: String, label: String, lhs: &OperatorExpr) {
        self.eq(id, label, lhs, &OperatorExpr::zero());
    }

    /// `[A_i, B_j] = 0` for all `i, j`.
    fn commute(&mut self, tag: &str, a: (&str, &[OperatorExpr; 3]), b: (&str, &[OperatorExpr; 3])) {
        for i in 0..3 {
            for j in 0..3 {
                self.zero(
                    format!("lemma.{tag}.{}{}.{}{}", a.0, i + 1, b.0, j + 1),
                    format!("[{}{}, {}{}]", a.0, i + 1, b.0, j + 1),
                    &a.1[i].commutator(&b.1[j]),
                );
            }
        }
    }

    /// `[A_i, x] = 0` for all `i`.
    fn commute_one(&mut self, tag: &str, a: (&str, &[OperatorExpr; 3]), x: (&str, &OperatorExpr)) {
        for i in 0..3 {
            self.zero(
                format!("lemma.{tag}.{}{}", a.0, i + 1),
                format!("[{}{}, {}]", a.0, i + 1, x.0),
                &a.1[i].commutator(x.1),
            );
        }
    }

    /// `[A_i, B_j] = iħ ε_ijk C_k`
    fn rotates(&mut self, tag: &str, a: (&str, &[OperatorExpr; 3]), b: (&str, &[OperatorExpr; 3]), c: &[OperatorExpr; 3]) {
        for i in 0..3 {
            for j in 0..3 {
                self.eq(
                    format!("lemma.{tag}.{}{}.{}{}", a.0, i + 1, b.0, j + 1),
                    format!("[{}{}, {}{}]", a.0, i + 1, b.0, j + 1),
                    &a.1[i].commutator(&b.1[j]),
                    &eps_ihbar(c, i, j),
                );
            }
        }
    }
}

/// `iħ ε_ijk c_k`
fn eps_ihbar(c: &[OperatorExpr; 3], i: usize, j: usize) -> OperatorExpr {
    if i == j {
        return OperatorExpr::zero();
    }
    let k = 3 - i - j;
    c[k].scale_int(levi_civita(i, j, k)).scale(&ScalarCoeff::i_hbar())
}

/// `iħ(Λ^σ ε_ijk S_k/(ω+m) − P_i N_j/(ω(ω+m)))`; `with_lam` selects `σ = 1`.
fn q_n_form(n: &[OperatorExpr; 3], s: &[OperatorExpr; 3], i: usize, j: usize, with_lam: bool) -> OperatorExpr {
    let omega_m = ScalarCoeff::omega().add(&ScalarCoeff::mass());
    let inv = omega_m.inv().expect("ω + m is invertible");
    let inv_w = ScalarCoeff::omega().mul(&omega_m).inv().expect("ω(ω + m) is invertible");
    let mut first = if i == j {
        OperatorExpr::zero()
    } else {
        let k = 3 - i - j;
        s[k].scale_int(levi_civita(i, j, k)).scale(&inv)
    };
    if with_lam {
        first = OperatorExpr::lam().mul(&first);
    }
    let second = OperatorExpr::p(i).mul(&n[j]).scale(&inv_w);
    first.sub(&second).scale(&ScalarCoeff::i_hbar())
}

/// Every identity the Foldy construction must satisfy on the way from the
/// Poincaré relations to the position–momentum–spin relations.
pub fn lemma_suite(g: &GeneratorSet) -> Result<VerificationReport, GeneratorError> {
    let h = g.get("H")?.clone();
    let lam = g.get("Lam")?.clone();
    let [q, p, s, l, j, m, n, k, v] = ["Q", "P", "S", "L", "J", "M", "N", "K", "V"].map(|x| g.vector(x));
    let (q, p, s, l, j, m, n, k, v) = (q?, p?, s?, l?, j?, m?, n?, k?, v?);
    let mut t = Suite { entries: Vec::new() };

    for i in 0..3 {
        t.eq(format!("lemma.decompose.J{}", i + 1), format!("J{0} - L{0} - S{0}", i + 1), &j[i], &l[i].add(&s[i]));
        t.eq(format!("lemma.decompose.K{}", i + 1), format!("K{0} - M{0} - N{0}", i + 1), &k[i], &m[i].add(&n[i]));
    }

    let vxp = cross(&v, &p);
    for i in 0..3 {
        t.zero(format!("lemma.velocity_parallel.{}", i + 1), format!("(V x P){}", i + 1), &vxp[i]);
    }
    for i in 0..3 {
        for jj in 0..3 {
            let want = if i == jj { OperatorExpr::i_hbar() } else { OperatorExpr::zero() };
            t.eq(
                format!("lemma.heisenberg.Q{}.P{}", i + 1, jj + 1),
                format!("[Q{}, P{}]", i + 1, jj + 1),
                &q[i].commutator(&p[jj]),
                &want,
            );
        }
    }
    t.commute("velocity_translation", ("V", &v), ("P", &p));
    t.commute_one("velocity_conserved", ("V", &v), ("H", &h));
    let h_inv = h.inverse_central()?;
    for i in 0..3 {
        t.eq(format!("lemma.velocity_form.{}", i + 1), format!("V{}", i + 1), &v[i], &p[i].mul(&h_inv));
    }
    t.commute("positions_commute", ("Q", &q), ("Q", &q));
    t.rotates("q_rotates", ("Q", &q), ("L", &l), &q);
    t.commute("spin_translation", ("S", &s), ("P", &p));
    t.commute_one("spin_conserved", ("S", &s), ("H", &h));
    t.commute_one("spin_sector", ("S", &s), ("Lam", &lam));
    t.commute("n_translation", ("N", &n), ("P", &p));
    for i in 0..3 {
        t.zero(
            format!("lemma.m_conserved.M{}", i + 1),
            format!("dM{}/dt", i + 1),
            &m[i].total_time_derivative(&h),
        );
    }
    t.commute_one("n_conserved", ("N", &n), ("H", &h));
    t.commute_one("n_sector", ("N", &n), ("Lam", &lam));
    t.rotates("s_rotates", ("S", &s), ("J", &j), &s);
    t.rotates("n_rotates", ("N", &n), ("J", &j), &n);
    t.commute("q_spin", ("Q", &q), ("S", &s));
    t.commute("m_spin", ("M", &m), ("S", &s));
    t.commute("spin_orbit", ("S", &s), ("L", &l));
    t.rotates("spin_algebra", ("S", &s), ("S", &s), &s);

    for i in 0..3 {
        for jj in 0..3 {
            let anti = q[jj].mul(&v[i]).add(&v[i].mul(&q[jj])).half();
            let delta_t = if i == jj { OperatorExpr::time() } else { OperatorExpr::zero() };
            t.eq(
                format!("lemma.q_m_covariance.Q{}.M{}", i + 1, jj + 1),
                format!("[Q{}, M{}]", i + 1, jj + 1),
                &q[i].commutator(&m[jj]),
                &delta_t.sub(&anti).scale(&ScalarCoeff::i_hbar()),
            );
        }
    }

    // The stated form carries no Λ on the spin term; it holds where Λ = +1.
    // With Λ symbolic the spin term picks up a factor Λ.
    let sector_mode = g.sector;
    for i in 0..3 {
        for jj in 0..3 {
            let lhs = q[i].commutator(&n[jj]);
            let id = format!("Q{}.N{}", i + 1, jj + 1);
            let stated = ReportEntry::symbolic(
                format!("lemma.q_n.stated.{id}"),
                format!("[{}] against the form without Lambda", id.replace('.', ", ")),
                &lhs.sector(SectorMode::Positive),
                &q_n_form(&n, &s, i, jj, false).sector(SectorMode::Positive),
            );
            t.entries.push(if sector_mode == SectorMode::Negative { stated.recorded() } else { stated });
            if sector_mode != SectorMode::Positive {
                t.eq(
                    format!("lemma.q_n.lambda.{id}"),
                    format!("[{}]", id.replace('.', ", ")),
                    &lhs,
                    &q_n_form(&n, &s, i, jj, true).sector(sector_mode),
                );
            }
            t.zero(
                format!("lemma.q_n.linearity.Q{}.K{}", i + 1, jj + 1),
                format!("[Q{0}, K{1}] - [Q{0}, M{1}] - [Q{0}, N{1}]", i + 1, jj + 1),
                &q[i].commutator(&k[jj]).sub(&q[i].commutator(&m[jj])).sub(&lhs),
            );
        }
    }
    // Covariance fails exactly when spin is present.
    let (i0, j0) = (0, 1);
    let generic = q[i0].commutator(&n[j0]);
    t.entries.push(ReportEntry::nonzero("lemma.q_n.nonzero_with_spin", "[Q1, N2]", &generic));
    t.zero("lemma.q_n.vanishes_without_spin".into(), "[Q1, N2] at S = 0".into(), &generic.without_spin());
    let all_vanish = (0..3).all(|i| (0..3).all(|jj| q[i].commutator(&n[jj]).without_spin().is_zero()));
    t.entries.push(ReportEntry {
        id: "lemma.q_n.vanishes_without_spin.all".into(),
        lhs: "[Qi, Nj] at S = 0 for all i, j".into(),
        expected: "0".into(),
        residual: if all_vanish { "0".into() } else { "nonzero".into() },
        pass: all_vanish,
        asserted: true,
        numeric_residual: None,
    });

    let h_sq = h.mul(&h);
    let root = h_sq
        .as_scalar()
        .and_then(|c| c.sqrt_exact())
        .ok_or_else(|| GeneratorError::Rejected(format!("H^2 = {h_sq} has no exact square root")))?;
    let consistency = h.scale(&root.inv()?);
    t.eq("lemma.lambda_consistency".into(), "H (H^2)^(-1/2)".into(), &consistency, &lam);

    Ok(VerificationReport::new("lemmas", t.entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::foldy_generators;

    #[test]
    fn lemma_suite_passes_full_and_positive() {
        for sector in [SectorMode::Full, SectorMode::Positive, SectorMode::Negative] {
            let r = lemma_suite(&foldy_generators(sector)).unwrap();
            assert!(r.all_pass(), "{sector}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn stated_q_n_form_needs_lambda_on_negative_sector() {
        let g = foldy_generators(SectorMode::Negative);
        let q = g.vector("Q").unwrap();
        let n = g.vector("N").unwrap();
        let s = g.vector("S").unwrap();
        let lhs = q[0].commutator(&n[1]);
        assert_ne!(lhs, q_n_form(&n, &s, 0, 1, false));
        assert_eq!(lhs, q_n_form(&n, &s, 0, 1, true).sector(SectorMode::Negative));
    }
}
