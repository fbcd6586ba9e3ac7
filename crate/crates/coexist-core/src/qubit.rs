//! Bloch parametrization of 2x2 effects and the closed-form qubit coexistence
//! criterion.
//!
//! A qubit effect is written `A = (alpha I + a . sigma) / 2` with
//! `|a| <= alpha <= 2 - |a|`. Coexistence of two qubit effects is equivalent
//! to nonnegativity of the four-term function implemented by [`c_function`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::tol;

/// Qubit effect in Bloch form `(alpha, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEffect {
    pub alpha: f64,
    pub a: [f64; 3],
}

impl BlochEffect {
    /// Validates `|a| <= alpha <= 2 - |a|` within `tol` and constructs.
    pub fn new(alpha: f64, a: [f64; 3], tol: f64) -> Result<Self> {
        let norm = norm3(&a);
        if alpha < norm - tol {
            // smaller eigenvalue (alpha - |a|)/2 drops below zero
            return Err(Error::NotAnEffect((alpha - norm) / 2.0));
        }
        if alpha > 2.0 - norm + tol {
            // larger eigenvalue (alpha + |a|)/2 exceeds one
            return Err(Error::NotAnEffect((alpha + norm) / 2.0));
        }
        Ok(BlochEffect { alpha, a })
    }

    /// Constructs without validating the invariants.
    pub fn new_unchecked(alpha: f64, a: [f64; 3]) -> Self {
        BlochEffect { alpha, a }
    }

    pub fn norm_a(&self) -> f64 {
        norm3(&self.a)
    }

    /// The complement `1 - A`, i.e. `(2 - alpha, -a)`.
    pub fn complement(&self) -> Self {
        BlochEffect {
            alpha: 2.0 - self.alpha,
            a: [-self.a[0], -self.a[1], -self.a[2]],
        }
    }

    /// An effect is unbiased when `alpha = 1`.
    pub fn is_unbiased(&self, tol: f64) -> bool {
        (self.alpha - 1.0).abs() <= tol
    }
}

fn norm3(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Extracts Bloch parameters from a 2x2 effect: `alpha = tr A`,
/// `a_k = tr(A sigma_k)`.
pub fn to_bloch(a: &Effect) -> Result<BlochEffect> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch(a.dim(), 2));
    }
    let m = a.matrix().raw();
    let alpha = (m[(0, 0)] + m[(1, 1)]).re;
    let ax = 2.0 * m[(0, 1)].re;
    let ay = -2.0 * m[(0, 1)].im;
    let az = (m[(0, 0)] - m[(1, 1)]).re;
    BlochEffect::new(alpha, [ax, ay, az], tol::EFF)
}

/// Builds the 2x2 effect `(alpha I + a . sigma) / 2`.
pub fn from_bloch(b: &BlochEffect) -> Effect {
    let m = DMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.5 * (b.alpha + b.a[2]), 0.0),
        Complex64::new(0.5 * b.a[0], -0.5 * b.a[1]),
        Complex64::new(0.5 * b.a[0], 0.5 * b.a[1]),
        Complex64::new(0.5 * (b.alpha - b.a[2]), 0.0),
    ]);
    Effect::new_unchecked(HermitianMatrix::symmetrize(m))
}

/// The bracket `<A|B> = alpha beta - a . b`.
pub fn bracket(a: &BlochEffect, b: &BlochEffect) -> f64 {
    a.alpha * b.alpha - dot3(&a.a, &b.a)
}

/// The qubit coexistence function
///
/// ```text
/// c(A, B) = sqrt(<A|A><Ap|Ap><B|B><Bp|Bp>)
///           - <A|Ap><B|Bp> + <A|Bp><Ap|B> + <A|B><Ap|Bp>
/// ```
///
/// with `p` marking complements. For valid effects every factor under the
/// square root is nonnegative, so a radicand below `-1e-12` signals invalid
/// inputs; small negative noise is clamped to zero.
pub fn c_function(a: &BlochEffect, b: &BlochEffect) -> Result<f64> {
    let ap = a.complement();
    let bp = b.complement();
    // grouped per effect so that swapping the arguments commutes exactly
    let radicand = (bracket(a, a) * bracket(&ap, &ap)) * (bracket(b, b) * bracket(&bp, &bp));
    if radicand < -tol::RADICAND {
        return Err(Error::NegativeRadicand(radicand));
    }
    let root = radicand.max(0.0).sqrt();
    Ok(root - bracket(a, &ap) * bracket(b, &bp)
        + bracket(a, &bp) * bracket(&ap, b)
        + bracket(a, b) * bracket(&ap, &bp))
}

/// Theorem-level criterion: the effects coexist iff `c(A, B) >= 0`, tested
/// here as `c >= -tol` with the default decision tolerance.
pub fn qubit_coexistent(a: &BlochEffect, b: &BlochEffect) -> Result<bool> {
    Ok(c_function(a, b)? >= -tol::DECISION)
}

/// Simplified form of [`c_function`] valid when one of `A`, `A^perp`, `B`,
/// `B^perp` is rank-1, in which case the radicand vanishes.
pub fn c_function_rank1(a: &BlochEffect, b: &BlochEffect) -> Result<f64> {
    let ap = a.complement();
    let bp = b.complement();
    let min_self = [
        bracket(a, a),
        bracket(&ap, &ap),
        bracket(b, b),
        bracket(&bp, &bp),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if min_self.abs() > tol::EFF {
        return Err(Error::PreconditionViolated(format!(
            "no rank-1 operator among A, A_perp, B, B_perp (min <E|E> = {min_self:.3e})"
        )));
    }
    Ok(-bracket(a, &ap) * bracket(b, &bp)
        + bracket(a, &bp) * bracket(&ap, b)
        + bracket(a, b) * bracket(&ap, &bp))
}

/// Simplified form of [`c_function`] for two unbiased effects (`alpha = beta = 1`).
pub fn c_function_unbiased(a: &BlochEffect, b: &BlochEffect) -> Result<f64> {
    if !a.is_unbiased(tol::EFF) || !b.is_unbiased(tol::EFF) {
        return Err(Error::PreconditionViolated(format!(
            "effects are not unbiased: alpha = {}, beta = {}",
            a.alpha, b.alpha
        )));
    }
    let ap = a.complement();
    let bp = b.complement();
    Ok(bracket(a, a) * bracket(b, b) - bracket(a, &ap) * bracket(b, &bp)
        + bracket(a, &bp).powi(2)
        + bracket(a, b).powi(2))
}
