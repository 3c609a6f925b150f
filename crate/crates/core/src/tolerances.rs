//! Pass thresholds shared by the suites, the CLI and the tests.

/// Grid residuals of relations that hold symbolically.
pub const NUMERIC: f64 = 1e-6;

/// Fock-space identities and expectation values.
pub const EXPECTATION: f64 = 1e-10;

/// Residuals at or below this count as converged regardless of the
/// refinement ratio.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

/// Largest relative norm a test state may carry near the momentum box edge
/// before a band-limit warning is raised.
pub const BAND_LIMIT: f64 = 1e-5;

/// Equal-time commutators of disjoint position projectors.
pub const CAUSALITY_ZERO: f64 = 1e-12;

/// Unequal-time commutators must exceed this to count as nonzero.
pub const CAUSALITY_NONZERO: f64 = 1e-6;

/// Norm drift allowed under free evolution.
pub const UNITARITY: f64 = 1e-10;
