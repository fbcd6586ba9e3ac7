//! Effects (positive operators bounded by the identity), their complement and
//! generalized infimum, and the three classical sufficient conditions for
//! coexistence: commutativity, comparability, and positivity of generalized
//! infima.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::tol;

/// A Hermitian operator with spectrum in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: HermitianMatrix,
}

/// Validates that `m` has spectrum inside `[-tol, 1 + tol]` and returns the
/// effect. Eigenvalues that exceed [0, 1] by at most `tol` are clamped in the
/// stored canonical form; exactly admissible matrices are stored unchanged.
pub fn validate_effect(m: HermitianMatrix, tol: f64) -> Result<Effect> {
    let eig = m.eig()?;
    let lo = eig.lambda_min();
    let hi = eig.lambda_max();
    if lo < -tol {
        return Err(Error::NotAnEffect(lo));
    }
    if hi > 1.0 + tol {
        return Err(Error::NotAnEffect(hi));
    }
    let matrix = if lo >= 0.0 && hi <= 1.0 {
        m
    } else {
        eig.apply(|x| x.clamp(0.0, 1.0))
    };
    Ok(Effect { matrix })
}

impl Effect {
    /// Validates with the default effect tolerance.
    pub fn new(m: HermitianMatrix) -> Result<Self> {
        validate_effect(m, tol::EFF)
    }

    /// Wraps a matrix the caller guarantees to be an effect.
    pub fn new_unchecked(matrix: HermitianMatrix) -> Self {
        Effect { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Effect {
            matrix: HermitianMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Effect {
            matrix: HermitianMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    /// The complement `1 - A`; an involution on effects.
    pub fn complement(&self) -> Self {
        let compl = HermitianMatrix::identity(self.dim())
            .sub(&self.matrix)
            .expect("same dimension");
        Effect { matrix: compl }
    }

    /// `true` iff the spectrum lies within `tol` of {0, 1}.
    pub fn is_projection(&self, tol: f64) -> Result<bool> {
        let eig = self.matrix.eig()?;
        Ok(eig
            .eigenvalues()
            .iter()
            .all(|&l| f64::min(l.abs(), (1.0 - l).abs()) <= tol))
    }

    /// Rank of a projection, counted as the number of eigenvalues near 1.
    pub fn projection_rank(&self, tol: f64) -> Result<usize> {
        let eig = self.matrix.eig()?;
        let mut rank = 0;
        for &l in eig.eigenvalues() {
            if (1.0 - l).abs() <= tol {
                rank += 1;
            } else if l.abs() > tol {
                return Err(Error::NotAProjection(l));
            }
        }
        Ok(rank)
    }

    /// Scales the effect by `s in [0, 1]`.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidRange(format!("scale {s} outside [0, 1]")));
        }
        Ok(Effect {
            matrix: self.matrix.scale(s),
        })
    }
}

fn check_dims(a: &Effect, b: &Effect) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// Spectral absolute value computed on a sign-canonicalized copy, so that
/// `|A - B|` and `|B - A|` agree bit for bit.
fn oriented_abs(d: &HermitianMatrix) -> Result<HermitianMatrix> {
    let raw = d.raw();
    let n = d.dim();
    let mut flip = false;
    'scan: for i in 0..n {
        for j in i..n {
            let z = raw[(i, j)];
            if z.re != 0.0 {
                flip = z.re < 0.0;
                break 'scan;
            }
            if z.im != 0.0 {
                flip = z.im < 0.0;
                break 'scan;
            }
        }
    }
    if flip {
        d.scale(-1.0).abs()
    } else {
        d.abs()
    }
}

/// The generalized infimum `A |_| B = (A + B - |A - B|) / 2`.
///
/// The result need not be positive semidefinite; that potential failure of
/// positivity is exactly what the GINF condition tests, so a plain Hermitian
/// matrix is returned.
pub fn gen_inf(a: &Effect, b: &Effect) -> Result<HermitianMatrix> {
    check_dims(a, b)?;
    let diff = a.matrix().sub(b.matrix())?;
    let sum = a.matrix().add(b.matrix())?;
    Ok(sum.sub(&oriented_abs(&diff)?)?.scale(0.5))
}

/// Both generalized infima of one GINF disjunct, sharing the absolute-value
/// computation: for `(A, B)` these are `A |_| B` and `A^perp |_| B^perp`,
/// whose defining differences are negatives of each other.
fn disjunct_infima(a: &Effect, b: &Effect) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let diff_abs = oriented_abs(&a.matrix().sub(b.matrix())?)?;
    let sum = a.matrix().add(b.matrix())?;
    let inf = sum.sub(&diff_abs)?.scale(0.5);
    let two = HermitianMatrix::identity(a.dim()).scale(2.0);
    let inf_compl = two.sub(&sum)?.sub(&diff_abs)?.scale(0.5);
    Ok((inf, inf_compl))
}

/// The GINF sufficient condition for coexistence:
/// `(A |_| B >= 0 and A^perp |_| B^perp >= 0) or (A |_| B^perp >= 0 and A^perp |_| B >= 0)`.
pub fn ginf_condition(a: &Effect, b: &Effect, tol: f64) -> Result<bool> {
    check_dims(a, b)?;
    let (i1, i2) = disjunct_infima(a, b)?;
    if i1.is_psd(tol)? && i2.is_psd(tol)? {
        return Ok(true);
    }
    let (j1, j2) = disjunct_infima(a, &b.complement())?;
    Ok(j1.is_psd(tol)? && j2.is_psd(tol)?)
}

/// Signed margin of the GINF condition: the best disjunct's worst smallest
/// eigenvalue. Positive means GINF holds with room to spare; used by test
/// suites to exclude borderline instances.
pub fn ginf_margin(a: &Effect, b: &Effect) -> Result<f64> {
    check_dims(a, b)?;
    let mut best = f64::NEG_INFINITY;
    for other in [b.clone(), b.complement()] {
        let (i1, i2) = disjunct_infima(a, &other)?;
        let worst = f64::min(i1.eig()?.lambda_min(), i2.eig()?.lambda_min());
        best = f64::max(best, worst);
    }
    Ok(best)
}

/// `true` iff `|AB - BA| <= tol * |A| * |B|` in spectral norm.
pub fn commute(a: &Effect, b: &Effect, tol: f64) -> Result<bool> {
    check_dims(a, b)?;
    let k = a.matrix().raw() * b.matrix().raw() - b.matrix().raw() * a.matrix().raw();
    // i[A, B] is Hermitian, so the commutator norm comes from one eig call
    let ik = HermitianMatrix::symmetrize(k * Complex64::i());
    let norm_k = ik.spectral_norm()?;
    let norm_a = a.matrix().spectral_norm()?;
    let norm_b = b.matrix().spectral_norm()?;
    Ok(norm_k <= tol * norm_a * norm_b + f64::EPSILON)
}

/// `true` iff one of the four orderings `A <= B`, `B <= A`, `A <= B^perp`,
/// `B^perp <= A` holds at tolerance `tol`.
pub fn comparable(a: &Effect, b: &Effect, tol: f64) -> Result<bool> {
    check_dims(a, b)?;
    let b_perp = b.complement();
    for (lo, hi) in [(a, b), (b, a), (a, &b_perp), (&b_perp, a)] {
        if hi.matrix().sub(lo.matrix())?.is_psd(tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}
