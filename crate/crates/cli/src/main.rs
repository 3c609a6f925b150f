//! `qps`: runs the symbolic and numeric verification suites and demos.

mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qps", version, about = "Verification suites for the position-momentum-spin operator algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Exact symbolic suites.
    Verify {
        #[arg(value_enum)]
        suite: VerifySuite,
    },
    /// Grid cross-checks of the symbolic relations.
    Numeric {
        #[arg(value_enum)]
        suite: NumericSuite,
    },
    /// Free evolution of a Newton-Wigner localized packet.
    Localize,
    /// Commutator norm of two Newton-Wigner position projectors.
    Causality,
    /// Truncated Fock space of a lattice scalar field.
    Fock {
        #[arg(value_enum)]
        suite: FockSuite,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Poincare,
    Bargmann,
    Lemmas,
    Casimirs,
    Pl,
    Boost,
    Emrelation,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericSuite {
    Residuals,
    Casimir,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockSuite {
    Duality,
    Expectation,
    Spectrum,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Parameters shared by the subcommands; each uses the ones it needs.
#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Particle or field mass.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Spin for the grid suites; both 0 and 1/2 when omitted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Grid dimension.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Grid points per axis.
    #[arg(long, global = true)]
    pub npts: Option<usize>,
    /// Momentum half-width of the grid.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub pmax: Option<f64>,
    /// Lattice sites of the Fock field.
    #[arg(long, global = true)]
    pub sites: Option<usize>,
    /// Largest total particle number kept.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Position width of the localized packet.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Packet centre, or the lattice site for `fock expectation`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Final time for `localize`, time of the second projector for `causality`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// First projector region as `lo,hi`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_interval)]
    pub region: Option<(f64, f64)>,
    /// Second projector region as `lo,hi`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_interval)]
    pub region2: Option<(f64, f64)>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Pass threshold for grid residuals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Candidate Hamiltonian for `verify emrelation`.
    #[arg(long, global = true)]
    pub h: Option<String>,
    /// Artifact path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err("need lo < hi".into())
    }
}

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
