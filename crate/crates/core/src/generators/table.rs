use rayon::prelude::*;

use super::{GeneratorError, GeneratorSet, ReportEntry, VerificationReport};
use crate::algebra::{levi_civita, OperatorExpr, Spin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Poincare,
    /// `(H, P, L, M)` in the roles of `(H, P, J, K)`.
    PoincareSpinless,
    /// `(H, P, J, C)` with the central mass `M`.
    Bargmann,
}

impl TableKind {
    fn roles(self) -> [&'static str; 4] {
        match self {
            TableKind::Poincare => ["H", "P", "J", "K"],
            TableKind::PoincareSpinless => ["H", "P", "L", "M"],
            TableKind::Bargmann => ["H", "P", "J", "C"],
        }
    }

    fn suite(self) -> &'static str {
        match self {
            TableKind::Poincare => "poincare",
            TableKind::PoincareSpinless => "poincare_spinless",
            TableKind::Bargmann => "bargmann",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TableOptions {
    /// Reduce residuals with `S² = ħ²s(s+1)` before judging them.
    pub casimir: Option<Spin>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    H,
    P(usize),
    J(usize),
    K(usize),
}

const ROLES: [Role; 10] = [
    Role::H,
    Role::P(0),
    Role::P(1),
    Role::P(2),
    Role::J(0),
    Role::J(1),
    Role::J(2),
    Role::K(0),
    Role::K(1),
    Role::K(2),
];

struct Table {
    kind: TableKind,
    h: OperatorExpr,
    p: [OperatorExpr; 3],
    j: [OperatorExpr; 3],
    k: [OperatorExpr; 3],
    central_mass: Option<OperatorExpr>,
}

impl Table {
    fn get(&self, r: Role) -> &OperatorExpr {
        match r {
            Role::H => &self.h,
            Role::P(i) => &self.p[i],
            Role::J(i) => &self.j[i],
            Role::K(i) => &self.k[i],
        }
    }

    fn name(&self, r: Role) -> String {
        let roles = self.kind.roles();
        match r {
            Role::H => roles[0].to_string(),
            Role::P(i) => format!("{}{}", roles[1], i + 1),
            Role::J(i) => format!("{}{}", roles[2], i + 1),
            Role::K(i) => format!("{}{}", roles[3], i + 1),
        }
    }

    /// `Σ_k ε_ijk v_k`
    fn eps(v: &[OperatorExpr; 3], i: usize, j: usize) -> OperatorExpr {
        if i == j {
            return OperatorExpr::zero();
        }
        let k = 3 - i - j;
        v[k].scale_int(levi_civita(i, j, k))
    }

    fn delta(i: usize, j: usize, e: &OperatorExpr) -> OperatorExpr {
        if i == j {
            e.clone()
        } else {
            OperatorExpr::zero()
        }
    }

    /// The table value of `(1/iħ)[a, b]`.
    fn expected(&self, a: Role, b: Role) -> OperatorExpr {
        use Role::*;
        let galilean = self.kind == TableKind::Bargmann;
        let zero = OperatorExpr::zero();
        match (a, b) {
            (H, K(j)) => self.p[j].clone(),
            (K(i), H) => self.p[i].neg(),
            (P(i), J(j)) | (J(i), P(j)) => Table::eps(&self.p, i, j),
            (P(i), K(j)) if galilean => Table::delta(i, j, self.central_mass.as_ref().expect("mass")),
            (K(i), P(j)) if galilean => Table::delta(i, j, self.central_mass.as_ref().expect("mass")).neg(),
            (P(i), K(j)) => Table::delta(i, j, &self.h),
            (K(i), P(j)) => Table::delta(i, j, &self.h).neg(),
            (J(i), J(j)) => Table::eps(&self.j, i, j),
            (J(i), K(j)) | (K(i), J(j)) => Table::eps(&self.k, i, j),
            (K(_), K(_)) if galilean => zero,
            (K(i), K(j)) => Table::eps(&self.j, i, j).neg(),
            _ => zero,
        }
    }
}

fn judge(entry: ReportEntry, residual: &OperatorExpr, opts: &TableOptions) -> ReportEntry {
    match opts.casimir {
        Some(spin) if !entry.pass => {
            let reduced = residual.reduce_casimir(spin);
            ReportEntry {
                residual: reduced.to_string(),
                pass: reduced.is_zero(),
                ..entry
            }
        }
        _ => entry,
    }
}

/// One entry per ordered pair of the ten generators comparing
/// `(1/iħ)[A, B]` with the table, plus the extra relations of each kind.
pub fn check_table(g: &GeneratorSet, which: TableKind) -> Result<VerificationReport, GeneratorError> {
    check_table_with(g, which, TableOptions::default())
}

/// One ordered pair of generators with the table value of `(1/iħ)[a, b]`.
#[derive(Clone, Debug)]
pub struct TableRelation {
    pub id: String,
    pub a_name: String,
    pub b_name: String,
    pub a: OperatorExpr,
    pub b: OperatorExpr,
    pub expected: OperatorExpr,
}

fn build_table(g: &GeneratorSet, which: TableKind) -> Result<Table, GeneratorError> {
    let roles = which.roles();
    Ok(Table {
        kind: which,
        h: g.get(roles[0])?.clone(),
        p: g.vector(roles[1])?,
        j: g.vector(roles[2])?,
        k: g.vector(roles[3])?,
        central_mass: if which == TableKind::Bargmann {
            Some(g.get("M")?.clone())
        } else {
            None
        },
    })
}

/// The 100 ordered pairs of the ten generators.
pub fn table_relations(g: &GeneratorSet, which: TableKind) -> Result<Vec<TableRelation>, GeneratorError> {
    let table = build_table(g, which)?;
    Ok(ROLES
        .iter()
        .flat_map(|a| ROLES.iter().map(move |b| (*a, *b)))
        .map(|(a, b)| {
            let (a_name, b_name) = (table.name(a), table.name(b));
            TableRelation {
                id: format!("{}.{a_name}.{b_name}", which.suite()),
                a: table.get(a).clone(),
                b: table.get(b).clone(),
                expected: table.expected(a, b),
                a_name,
                b_name,
            }
        })
        .collect())
}

pub fn check_table_with(
    g: &GeneratorSet,
    which: TableKind,
    opts: TableOptions,
) -> Result<VerificationReport, GeneratorError> {
    let table = build_table(g, which)?;
    let relations = table_relations(g, which)?;
    let mut entries: Vec<ReportEntry> = relations
        .par_iter()
        .map(|r| {
            let lhs = r.a.bracket(&r.b);
            let e = ReportEntry::symbolic(
                r.id.clone(),
                format!("(1/ihbar)[{}, {}]", r.a_name, r.b_name),
                &lhs,
                &r.expected,
            );
            judge(e, &lhs.sub(&r.expected), &opts)
        })
        .collect();

    match which {
        TableKind::PoincareSpinless => {
            let c1 = table.h.mul(&table.h).sub(&super::dot(&table.p, &table.p));
            entries.push(ReportEntry::symbolic(
                "poincare_spinless.mass_casimir",
                "H^2 - P.P",
                &c1,
                &OperatorExpr::mass().pow(2),
            ));
        }
        TableKind::Bargmann => {
            let mass = table.central_mass.clone().expect("mass");
            for r in ROLES {
                let n = table.name(r);
                entries.push(ReportEntry::symbolic(
                    format!("bargmann.central.M.{n}"),
                    format!("[M, {n}]"),
                    &mass.commutator(table.get(r)),
                    &OperatorExpr::zero(),
                ));
            }
            for i in 0..3 {
                for j in 0..3 {
                    let lhs = OperatorExpr::q(i).commutator(&table.k[j]);
                    let expected = if i == j {
                        OperatorExpr::i_hbar().mul(&OperatorExpr::time())
                    } else {
                        OperatorExpr::zero()
                    };
                    entries.push(ReportEntry::symbolic(
                        format!("bargmann.q_boost.Q{}.C{}", i + 1, j + 1),
                        format!("[Q{}, C{}]", i + 1, j + 1),
                        &lhs,
                        &expected,
                    ));
                }
            }
            for i in 0..3 {
                entries.push(ReportEntry::symbolic(
                    format!("bargmann.conserved.C{}", i + 1),
                    format!("dC{}/dt", i + 1),
                    &table.k[i].total_time_derivative(&table.h),
                    &OperatorExpr::zero(),
                ));
            }
        }
        TableKind::Poincare => {}
    }
    Ok(VerificationReport::new(which.suite(), entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bargmann_generators, foldy_generators};
    use crate::algebra::SectorMode;

    #[test]
    fn poincare_table_closes() {
        let r = check_table(&foldy_generators(SectorMode::Full), TableKind::Poincare).unwrap();
        assert_eq!(r.entries.len(), 100);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn bargmann_table_closes() {
        let r = check_table(&bargmann_generators(), TableKind::Bargmann).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn missing_generator_is_reported() {
        let g = bargmann_generators();
        assert!(matches!(check_table(&g, TableKind::Poincare), Err(GeneratorError::Missing(_))));
    }
}
