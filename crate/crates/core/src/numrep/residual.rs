use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::states::{edge_weight, gaussian_specs, GaussianSpec};
use super::{norm, realize, realize_tree, GridRep, LinearMap, NumError, SectorChoice, State};
use crate::algebra::{Expr, SectorMode, Spin};
use crate::generators::{foldy_generators, table_relations, GeneratorSet, ReportEntry, TableKind, VerificationReport};
use crate::tolerances::{BAND_LIMIT, NUMERIC, ROUNDOFF_FLOOR};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericConfig {
    pub d: usize,
    pub npts: usize,
    pub pmax: f64,
    pub mass: f64,
    pub spins: Vec<Spin>,
    pub hbar: f64,
    pub states: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            d: 3,
            npts: 32,
            pmax: 1.1,
            mass: 1.0,
            spins: vec![Spin::ZERO, Spin::HALF],
            hbar: 1.0,
            states: 8,
            seed: 0,
            tol: NUMERIC,
        }
    }
}

impl NumericConfig {
    fn grid(&self, npts: usize, spin: Spin) -> Result<GridRep, NumError> {
        GridRep::with_hbar(self.d, npts, self.pmax, self.mass, spin, self.hbar)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualResult {
    /// `max ‖Rψ‖/‖ψ‖` over the test states.
    pub max_residual: f64,
    pub per_state: Vec<f64>,
    pub warnings: Vec<String>,
}

fn band_warnings(states: &[State], grid: &GridRep) -> Vec<String> {
    states
        .iter()
        .enumerate()
        .filter_map(|(k, psi)| {
            let w = edge_weight(psi, grid);
            (w > BAND_LIMIT).then(|| format!("test state {k} has relative weight {w:.1e} near the momentum box edge"))
        })
        .collect()
}

fn relative_residuals(map: &LinearMap, states: &[State]) -> Vec<f64> {
    states.par_iter().map(|psi| norm(&map.apply(psi)) / norm(psi)).collect()
}

/// Applies the structural realization of `tree` to every test state.
pub fn residual_norm(tree: &Expr, grid: &GridRep, states: &[State]) -> Result<ResidualResult, NumError> {
    let map = realize_tree(tree, grid)?;
    let per_state = relative_residuals(&map, states);
    Ok(ResidualResult {
        max_residual: per_state.iter().cloned().fold(0.0, f64::max),
        per_state,
        warnings: band_warnings(states, grid),
    })
}

/// Passes when the fine residual is within `tol` and either shrank at least
/// fourfold from the coarse grid or is already at roundoff.
pub fn convergence_entry(id: String, label: String, coarse: f64, fine: f64, tol: f64) -> ReportEntry {
    let converging = fine <= ROUNDOFF_FLOOR || coarse >= 4.0 * fine;
    ReportEntry::numeric_with(
        id,
        label,
        format!("<= {tol:e}, shrinking 4x under refinement (coarse {coarse:.3e})"),
        fine,
        fine <= tol && converging,
    )
}

struct Relation {
    id: String,
    label: String,
    a: String,
    b: String,
    expected: crate::algebra::OperatorExpr,
}

fn relations(g: &GeneratorSet) -> Result<Vec<Relation>, NumError> {
    let mut out: Vec<Relation> = table_relations(g, TableKind::Poincare)
        .map_err(|e| NumError::Config(e.to_string()))?
        .into_iter()
        .map(|r| Relation {
            id: r.id,
            label: format!("(1/ihbar)[{}, {}]", r.a_name, r.b_name),
            a: r.a_name,
            b: r.b_name,
            expected: r.expected,
        })
        .collect();
    for i in 1..=3 {
        for j in 1..=3 {
            let expected = if i == j {
                crate::algebra::OperatorExpr::one()
            } else {
                crate::algebra::OperatorExpr::zero()
            };
            out.push(Relation {
                id: format!("heisenberg.Q{i}.P{j}"),
                label: format!("(1/ihbar)[Q{i}, P{j}]"),
                a: format!("Q{i}"),
                b: format!("P{j}"),
                expected,
            });
        }
    }
    Ok(out)
}

fn realize_set(g: &GeneratorSet, names: &[&str], grid: &GridRep) -> Result<BTreeMap<String, LinearMap>, NumError> {
    let mut out = BTreeMap::new();
    for name in names {
        for i in 1..=3 {
            let key = format!("{name}{i}");
            out.insert(key.clone(), realize(g.get(&key).expect("generator"), grid)?);
        }
    }
    out.insert("H".into(), realize(g.get("H").expect("generator"), grid)?);
    Ok(out)
}

fn relation_maps(g: &GeneratorSet, rels: &[Relation], grid: &GridRep) -> Result<Vec<LinearMap>, NumError> {
    let ops = realize_set(g, &["P", "Q", "J", "K"], grid)?;
    let inv_ih = Complex64::new(0.0, -1.0 / grid.hbar);
    rels.iter()
        .map(|r| {
            let comm = LinearMap::commutator(&ops[&r.a], &ops[&r.b]).scale(inv_ih);
            Ok(LinearMap::sub(comm, realize(&r.expected, grid)?))
        })
        .collect()
}

fn spin_tag(s: Spin) -> String {
    format!("s={s}")
}

/// Every Poincaré table entry and the position–momentum relations, evaluated
/// by composing realized generators on a grid of `npts` and of `npts/2`
/// points per axis (same momentum box) for each configured spin.
pub fn numeric_residual_suite(cfg: &NumericConfig) -> Result<VerificationReport, NumError> {
    if cfg.d != 3 {
        return Err(NumError::Config("the Poincaré residual suite needs d = 3".into()));
    }
    let g = foldy_generators(SectorMode::Full);
    let rels = relations(&g)?;
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for &spin in &cfg.spins {
        let fine = cfg.grid(cfg.npts, spin)?;
        let coarse = cfg.grid(cfg.npts / 2, spin)?;
        let specs = gaussian_specs(cfg.seed, cfg.states, &fine, None, SectorChoice::Both);
        let sample = |grid: &GridRep| specs.iter().map(|s: &GaussianSpec| s.sample(grid)).collect::<Vec<_>>();
        let (fine_states, coarse_states) = (sample(&fine), sample(&coarse));
        warnings.extend(band_warnings(&fine_states, &fine).into_iter().map(|w| format!("{}: {w}", spin_tag(spin))));
        let fine_maps = relation_maps(&g, &rels, &fine)?;
        let coarse_maps = relation_maps(&g, &rels, &coarse)?;
        let results: Vec<(f64, f64)> = fine_maps
            .par_iter()
            .zip(coarse_maps.par_iter())
            .map(|(f, c)| {
                let worst = |m: &LinearMap, st: &[State]| relative_residuals(m, st).into_iter().fold(0.0, f64::max);
                (worst(c, &coarse_states), worst(f, &fine_states))
            })
            .collect();
        for (r, (c, f)) in rels.iter().zip(results) {
            entries.push(convergence_entry(
                format!("numeric.{}.{}", spin_tag(spin), r.id),
                r.label.clone(),
                c,
                f,
                cfg.tol,
            ));
        }
    }
    let mut report = VerificationReport::new("numeric_residuals", entries);
    report.warnings = warnings;
    Ok(report)
}

/// `W0∘W0 − Σ W_i∘W_i` composed from realized `H`, `P`, `J`, `K`.
fn casimir_map(g: &GeneratorSet, grid: &GridRep) -> Result<LinearMap, NumError> {
    let ops = realize_set(g, &["P", "J", "K"], grid)?;
    let one = Complex64::new(1.0, 0.0);
    let get = |n: &str, i: usize| ops[&format!("{n}{}", i + 1)].clone();
    let w0 = LinearMap::sum((0..3).map(|i| (one, LinearMap::compose(get("J", i), get("P", i)))).collect());
    let w: Vec<LinearMap> = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            LinearMap::sum(vec![
                (one, LinearMap::compose(ops["H"].clone(), get("J", i))),
                (-one, LinearMap::compose(get("P", j), get("K", k))),
                (one, LinearMap::compose(get("P", k), get("K", j))),
            ])
        })
        .collect();
    let mut parts = vec![(one, LinearMap::compose(w0.clone(), w0))];
    for wi in w {
        parts.push((-one, LinearMap::compose(wi.clone(), wi)));
    }
    Ok(LinearMap::sum(parts))
}

/// Checks `W0² − W·W = −ħ²m²s(s+1)` as a vector identity on test states
/// supported in each sector.
pub fn casimir_spectrum(cfg: &NumericConfig) -> Result<VerificationReport, NumError> {
    if cfg.d != 3 {
        return Err(NumError::Config("the Casimir check needs d = 3".into()));
    }
    let g = foldy_generators(SectorMode::Full);
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for &spin in &cfg.spins {
        let grid = cfg.grid(cfg.npts, spin)?;
        let c = casimir_map(&g, &grid)?;
        let s = spin.value();
        let lambda = -cfg.hbar * cfg.hbar * cfg.mass * cfg.mass * s * (s + 1.0);
        let scale = lambda.abs().max(cfg.hbar * cfg.hbar * cfg.mass * cfg.mass);
        for (tag, choice) in [("positive", SectorChoice::Positive), ("negative", SectorChoice::Negative)] {
            let states: Vec<State> = gaussian_specs(cfg.seed, cfg.states, &grid, None, choice)
                .iter()
                .map(|sp| sp.sample(&grid))
                .collect();
            warnings.extend(band_warnings(&states, &grid));
            let res: Vec<f64> = states
                .par_iter()
                .map(|psi| {
                    let cpsi = c.apply(psi);
                    let diff: State = cpsi.iter().zip(psi).map(|(a, b)| a - lambda * b).collect();
                    norm(&diff) / (scale * norm(psi))
                })
                .collect();
            for (k, r) in res.into_iter().enumerate() {
                entries.push(ReportEntry::numeric_with(
                    format!("casimir_numeric.{}.{tag}.state{k}", spin_tag(spin)),
                    "W0^2 - W.W",
                    format!("{lambda} (relative tolerance {:e})", cfg.tol),
                    r,
                    r <= cfg.tol,
                ));
            }
        }
    }
    let mut report = VerificationReport::new("casimir_numeric", entries);
    report.warnings = warnings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_tree;
    use crate::numrep::gaussian_family;

    #[test]
    fn heisenberg_on_fine_line() {
        let g = GridRep::new(1, 512, 12.0, 1.0, Spin::ZERO).unwrap();
        let states = gaussian_family(0, 4, &g, Some(1.0), SectorChoice::Both);
        let tree = parse_tree("[Q1, P1] - i*hbar", None).unwrap();
        let r = residual_norm(&tree, &g, &states).unwrap();
        assert!(r.max_residual <= 1e-10, "{}", r.max_residual);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn wide_states_trigger_band_warning() {
        let g = GridRep::new(1, 64, 3.0, 1.0, Spin::ZERO).unwrap();
        let states = gaussian_family(0, 1, &g, Some(3.0), SectorChoice::Both);
        let r = residual_norm(&parse_tree("P1", None).unwrap(), &g, &states).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn convergence_rule() {
        assert!(convergence_entry("a".into(), "a".into(), 1e-5, 1e-7, 1e-6).pass);
        assert!(!convergence_entry("a".into(), "a".into(), 2e-7, 1e-7, 1e-6).pass);
        assert!(convergence_entry("a".into(), "a".into(), 0.0, 0.0, 1e-6).pass);
        assert!(!convergence_entry("a".into(), "a".into(), 1.0, 1e-3, 1e-6).pass);
    }
}
