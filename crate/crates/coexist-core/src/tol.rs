//! Default numerical tolerances.
//!
//! Dimensions handled by this crate are tiny (a few dozen at most), so double
//! precision leaves several orders of magnitude of headroom over all of these.

/// Relative tolerance for Hermitian symmetry checks.
pub const HERM: f64 = 1e-10;

/// Relative tolerance for orthonormality of eigenvector columns.
pub const ORTH: f64 = 1e-10;

/// Relative tolerance for spectral reconstruction residuals.
pub const RECON: f64 = 1e-10;

/// Absolute tolerance on effect spectra (membership of eigenvalues in [0, 1]).
pub const EFF: f64 = 1e-9;

/// Decision tolerance for sign tests on the coexistence function; values with
/// magnitude at or below this are reported as borderline.
pub const DECISION: f64 = 1e-9;

/// Clamping floor for the radicand of the coexistence function. Valid effect
/// pairs can only produce negative radicands through floating-point noise.
pub const RADICAND: f64 = 1e-12;

/// Relative gap below which eigenvalues are clustered into one multiplicity
/// group when building a two-projection decomposition.
pub const CLUSTER: f64 = 1e-8;

/// Default feasibility tolerance for the convex-feasibility oracle.
pub const FEAS: f64 = 1e-9;

/// Iterate-displacement threshold for the oracle's stall detector.
pub const STALL: f64 = 1e-12;

/// Default iteration cap for the oracle.
pub const MAX_ITER: usize = 10_000;
