use anyhow::{bail, Context, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use qps_core::fockfield::{duality_suite, expectation_suite, fwhm, spectrum_suite};
use qps_core::generators::{
    bargmann_generators, boost_matrix_identities, casimirs, check_table, energy_momentum_constraint_check,
    foldy_generators, lemma_suite, pauli_lubanski, ReportEntry, TableKind, VerificationReport,
};
use qps_core::numrep::{
    casimir_spectrum, microcausality_check, numeric_residual_suite, nw_evolution, Interval, NumericConfig, NwParams,
};
use qps_core::tolerances::{CAUSALITY_NONZERO, CAUSALITY_ZERO, UNITARITY};
use qps_core::{parse_expr, FockField, GridRep, SectorMode, Spin};
use serde_json::json;

use crate::output::{companion, report_csv, summary_line, write_atomic};
use crate::{Cli, Command, FockSuite, Format, NumericSuite, Opts, VerifySuite};

const FOCK_SITES: usize = 8;
const FOCK_NMAX: usize = 3;
const CAUSALITY_NPTS: usize = 1024;
const CAUSALITY_PMAX: f64 = 40.0;
const CAUSALITY_T: f64 = 1.0;
const REGION: (f64, f64) = (-2.0, -0.5);
const REGION2: (f64, f64) = (1.5, 3.0);

/// What a subcommand produced: the report that decides the exit status, the
/// artifact in the requested format, and optionally a JSON companion.
struct Artifacts {
    report: VerificationReport,
    primary: String,
    companion_json: Option<String>,
}

impl Artifacts {
    fn from_report(report: VerificationReport, format: Format) -> Result<Self> {
        let primary = match format {
            Format::Json => report.to_json(),
            Format::Csv => report_csv(&report)?,
        };
        Ok(Artifacts {
            report,
            primary,
            companion_json: None,
        })
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => bail!("--{name} must be positive, got {x}"),
        _ => Ok(()),
    }
}

fn validate(o: &Opts) -> Result<()> {
    positive("m", o.m)?;
    positive("pmax", o.pmax)?;
    positive("sigma", o.sigma)?;
    positive("tol", o.tol)?;
    for (name, v) in [("npts", o.npts), ("sites", o.sites), ("d", o.d)] {
        if v == Some(0) {
            bail!("--{name} must be positive");
        }
    }
    if let Some(t) = o.t {
        if !t.is_finite() {
            bail!("--t must be finite");
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<bool> {
    let o = &cli.opts;
    validate(o)?;
    let art = match cli.command {
        Command::Verify { suite } => Artifacts::from_report(verify(suite, o)?, o.format)?,
        Command::Numeric { suite } => Artifacts::from_report(numeric(suite, o)?, o.format)?,
        Command::Localize => localize(o)?,
        Command::Causality => Artifacts::from_report(causality(o)?, o.format)?,
        Command::Fock { suite } => fock(suite, o)?,
    };
    match &o.out {
        Some(path) => {
            write_atomic(path, &art.primary)?;
            if let (Some(extra), Format::Csv) = (&art.companion_json, o.format) {
                write_atomic(&companion(path, "json"), extra)?;
            }
        }
        None => print!("{}", art.primary),
    }
    eprintln!("{}", summary_line(&art.report));
    Ok(art.report.all_pass())
}

fn verify(suite: VerifySuite, o: &Opts) -> Result<VerificationReport> {
    let foldy = || foldy_generators(SectorMode::Full);
    Ok(match suite {
        VerifySuite::Poincare => check_table(&foldy(), TableKind::Poincare)?,
        VerifySuite::Bargmann => check_table(&bargmann_generators(), TableKind::Bargmann)?,
        VerifySuite::Lemmas => {
            let mut r = lemma_suite(&foldy())?;
            for sector in [SectorMode::Positive, SectorMode::Negative] {
                let mut part = lemma_suite(&foldy_generators(sector))?;
                for e in &mut part.entries {
                    e.id = format!("{sector}.{}", e.id);
                }
                r.extend(part);
            }
            r
        }
        VerifySuite::Casimirs => {
            let g = foldy();
            let mut r = casimirs(&g)?;
            r.extend(check_table(&g.spinless(), TableKind::PoincareSpinless)?);
            r
        }
        VerifySuite::Pl => pauli_lubanski(&foldy())?,
        VerifySuite::Boost => boost_matrix_identities()?,
        VerifySuite::Emrelation => {
            let text = o.h.as_deref().unwrap_or("Lam*omega");
            let h = parse_expr(text).with_context(|| format!("parsing --h `{text}`"))?;
            energy_momentum_constraint_check(&h)?
        }
    })
}

fn numeric_config(o: &Opts) -> Result<NumericConfig> {
    let mut cfg = NumericConfig::default();
    if let Some(d) = o.d {
        cfg.d = d;
    }
    if let Some(n) = o.npts {
        cfg.npts = n;
    }
    if let Some(p) = o.pmax {
        cfg.pmax = p;
    }
    if let Some(m) = o.m {
        cfg.mass = m;
    }
    if let Some(s) = o.s {
        cfg.spins = vec![Spin::from_f64(s)?];
    }
    if let Some(t) = o.tol {
        cfg.tol = t;
    }
    cfg.seed = o.seed;
    Ok(cfg)
}

fn numeric(suite: NumericSuite, o: &Opts) -> Result<VerificationReport> {
    let cfg = numeric_config(o)?;
    Ok(match suite {
        NumericSuite::Residuals => numeric_residual_suite(&cfg)?,
        NumericSuite::Casimir => casimir_spectrum(&cfg)?,
    })
}

fn localize(o: &Opts) -> Result<Artifacts> {
    let mut p = NwParams::default();
    if let Some(m) = o.m {
        p.mass = m;
    }
    if let Some(s) = o.sigma {
        p.sigma = s;
    }
    if let Some(y) = o.y {
        p.y = y;
    }
    if let Some(t) = o.t {
        p.t = t;
    }
    if let Some(n) = o.npts {
        p.npts = n;
    }
    p.pmax = o.pmax;
    let evo = nw_evolution(&p)?;
    let outside = evo.outside_cone_probability();
    let mut slope = ReportEntry::numeric_with(
        "localize.tail_slope",
        "d ln(density)/dx beyond the light cone",
        format!("in [{}, {}]", -4.0 * p.mass, -p.mass),
        evo.fitted_slope,
        (-4.0 * p.mass..=-p.mass).contains(&evo.fitted_slope),
    )
    .recorded();
    if evo.fitted_slope.is_nan() {
        slope.residual = "no tail samples".into();
    }
    let report = VerificationReport::new(
        "localize",
        vec![
            ReportEntry::numeric_with(
                "localize.outside_cone",
                "probability beyond ct + 3 sigma",
                "> 0",
                outside,
                outside > 0.0,
            ),
            ReportEntry::numeric("localize.norm_drift", "max |norm - 1|", evo.max_norm_drift, UNITARITY),
            slope,
        ],
    );
    let json = serde_json::to_string_pretty(&json!({
        "outside_cone_probability": outside,
        "fitted_slope": evo.fitted_slope,
        "max_norm_drift": evo.max_norm_drift,
        "params": evo.params,
        "times": evo.times,
        "outside_cone": evo.outside_cone,
        "report": report,
    }))?;
    let (primary, companion_json) = match o.format {
        Format::Json => (json, None),
        Format::Csv => (evo.to_csv(), Some(json)),
    };
    Ok(Artifacts {
        report,
        primary,
        companion_json,
    })
}

fn causality(o: &Opts) -> Result<VerificationReport> {
    let grid = GridRep::new(
        1,
        o.npts.unwrap_or(CAUSALITY_NPTS),
        o.pmax.unwrap_or(CAUSALITY_PMAX),
        o.m.unwrap_or(1.0),
        Spin::ZERO,
    )?;
    let r = o.region.unwrap_or(REGION);
    let r2 = o.region2.unwrap_or(REGION2);
    let (r, r2) = (Interval::new(r.0, r.1), Interval::new(r2.0, r2.1));
    let t = o.t.unwrap_or(CAUSALITY_T);
    let equal = microcausality_check(r, 0.0, r2, 0.0, &grid, o.seed)?;
    let mut entries = vec![ReportEntry::numeric(
        "causality.equal_time",
        "||[P_R(0), P_R'(0)]||",
        equal.norm,
        CAUSALITY_ZERO,
    )];
    if t != 0.0 {
        let later = microcausality_check(r, 0.0, r2, t, &grid, o.seed)?;
        let e = ReportEntry::numeric_with(
            "causality.unequal_time",
            format!("||[P_R(0), P_R'({t})]||"),
            format!("> {CAUSALITY_NONZERO:e}"),
            later.norm,
            later.norm > CAUSALITY_NONZERO,
        );
        // The claim concerns spacelike separated regions only.
        entries.push(if later.spacelike { e } else { e.recorded() });
        if !later.converged {
            entries.push(
                ReportEntry::numeric_with("causality.unequal_time.iterations", "power iterations", "converged", later.iterations as f64, false)
                    .recorded(),
            );
        }
    }
    Ok(VerificationReport::new("causality", entries))
}

fn fock(suite: FockSuite, o: &Opts) -> Result<Artifacts> {
    let ns = o.sites.unwrap_or(FOCK_SITES);
    let field = FockField::new(ns, o.m.unwrap_or(1.0), o.nmax.unwrap_or(FOCK_NMAX))?;
    match suite {
        FockSuite::Duality => Artifacts::from_report(duality_suite(&field, o.seed)?, o.format),
        FockSuite::Spectrum => Artifacts::from_report(spectrum_suite(&field, o.seed)?, o.format),
        FockSuite::Expectation => {
            let y = o.y.unwrap_or((ns / 2) as f64);
            if y.fract() != 0.0 || y < 0.0 || y as usize >= ns {
                bail!("--y must be a site index in 0..{ns} for the lattice field, got {y}");
            }
            let y = y as usize;
            let mut psi = DVector::from_element(ns, Complex64::new(0.0, 0.0));
            psi[y] = Complex64::new(1.0, 0.0);
            let suite = expectation_suite(&field, &psi)?;
            let profile: Vec<f64> = suite.rows.iter().map(|r| r.difference).collect();
            let json = serde_json::to_string_pretty(&json!({
                "site": y,
                "fwhm": fwhm(&profile, y),
                "rows": suite.rows,
                "report": suite.report,
            }))?;
            let (primary, companion_json) = match o.format {
                Format::Json => (json, None),
                Format::Csv => (suite.to_csv(), Some(json)),
            };
            Ok(Artifacts {
                report: suite.report,
                primary,
                companion_json,
            })
        }
    }
}
