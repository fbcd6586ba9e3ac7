//! Decide joint measurability (coexistence) of pairs of quantum effects that
//! belong to the von Neumann algebra generated by two projections.
//!
//! The crate is organized around the canonical two-by-two block decomposition
//! of such an algebra: [`halmos::decompose`] turns a projection pair into a
//! basis in which every algebra element is block-diagonal with 2x2 blocks,
//! [`qubit`] provides the closed-form qubit coexistence criterion applied per
//! block, and [`coexistence`] combines the two into full verdicts backed by an
//! independent convex-feasibility oracle.

pub mod coexistence;
pub mod effects;
pub mod error;
pub mod halmos;
pub mod matrix;
pub mod qubit;
pub mod sampling;
pub mod tol;

pub use coexistence::{
    coexistent_in_algebra, copies_bound, feasibility_oracle, ginf_equals_coexistence_check,
    rank1_scaled_check, scaled_central_check, scaled_central_inf, scaled_central_inf_with_grid,
    CoexistenceVerdict, Decision, FeasibilityResult,
    Method, SpecH,
};
pub use effects::{commute, comparable, gen_inf, ginf_condition, validate_effect, Effect};
pub use error::{Error, Result};
pub use halmos::{
    block_of, central_element, commutation_kernel, decompose, in_algebra, reconstruct,
    BlockFunction, TwoProjectionDecomposition,
};
pub use matrix::{HermitianMatrix, SpectralDecomposition};
pub use qubit::{
    bracket, c_function, c_function_rank1, c_function_unbiased, from_bloch, qubit_coexistent,
    to_bloch, BlochEffect,
};
