//! Dense complex Hermitian spectral calculus at small dimension.
//!
//! Everything downstream (effects, the canonical two-projection decomposition,
//! the feasibility oracle) is built on eigendecompositions of matrices of
//! dimension at most a few dozen, so this module favors clarity and tight
//! residuals over scalability. The 2x2 case uses the closed form; larger
//! dimensions go through an iterative Hermitian solver with an identical
//! contract.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A square complex matrix with `M = M*` enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Largest absolute entry of a complex matrix.
pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest deviation from Hermitian symmetry, `max |M_ij - conj(M_ji)|`.
pub(crate) fn herm_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

impl HermitianMatrix {
    /// Wraps a square matrix, verifying Hermitian symmetry within the default
    /// relative tolerance.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        Self::new_with_tol(data, tol::HERM)
    }

    /// Wraps a square matrix, verifying `|M_ij - conj(M_ji)| <= tol * max(1, |M|_max)`.
    pub fn new_with_tol(data: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch(data.nrows(), data.ncols()));
        }
        let defect = herm_defect(&data);
        if defect > tol * f64::max(1.0, max_abs(&data)) {
            return Err(Error::NonHermitian(defect));
        }
        Ok(Self { data })
    }

    /// Replaces a matrix that is Hermitian up to floating-point noise by its
    /// Hermitian part `(M + M*) / 2`. Intended for products of commuting
    /// Hermitian operators and similar constructions.
    pub fn symmetrize(data: DMatrix<Complex64>) -> Self {
        let sym = (&data + data.adjoint()).scale(0.5);
        Self { data: sym }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            data: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    Complex64::ZERO
                }
            }),
        }
    }

    /// Rank-1 projection `v v* / (v* v)` onto the span of a nonzero vector.
    pub fn projector_onto(v: &nalgebra::DVector<Complex64>) -> Self {
        let norm2 = v.norm_squared();
        let m = v * v.adjoint() / Complex64::new(norm2, 0.0);
        Self { data: m }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn raw(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_raw(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Largest absolute entry; a cheap scale proxy used in relative checks.
    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.scale(s),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Eigendecomposition with eigenvalues sorted ascending.
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        if self.dim() == 2 {
            return Ok(eig2(&self.data));
        }
        eig_jacobi(&self.data)
    }

    /// `true` iff `lambda_min >= -tol * max(1, |M|)` with `|M|` the spectral norm.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let eig = self.eig()?;
        let lo = eig.lambda_min();
        let hi = eig.lambda_max();
        let norm = f64::max(lo.abs(), hi.abs());
        Ok(lo >= -tol * f64::max(1.0, norm))
    }

    /// Spectral norm `max |lambda_j|`.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = self.eig()?;
        Ok(f64::max(eig.lambda_min().abs(), eig.lambda_max().abs()))
    }

    /// Operator absolute value `sum |lambda_j| v_j v_j*`.
    pub fn abs(&self) -> Result<Self> {
        self.apply_spectral(f64::abs)
    }

    /// Spectral functional calculus `sum f(lambda_j) v_j v_j*`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(self.eig()?.apply(f))
    }

    /// Max-abs difference relative to `max(1, scale of self)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let diff = max_abs(&(&self.data - &other.data));
        diff <= tol * f64::max(1.0, self.max_abs_entry())
    }
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Assembles `sum f(lambda_j) v_j v_j*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let fj = Complex64::new(f(self.eigenvalues[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        HermitianMatrix::symmetrize(&scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|x| x)
    }

    /// Largest deviation of `V* V` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.eigenvalues.len();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        max_abs(&(gram - DMatrix::<Complex64>::identity(n, n)))
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation annihilates one off-diagonal entry with the unitary
/// `U = [[c, s], [-s conj(w), c conj(w)]]` where `w` is the phase of the
/// entry and `(c, s)` the classic symmetric Jacobi rotation of the
/// phase-reduced 2x2 block. Unconditionally convergent and accurate for
/// degenerate spectra, which projection-heavy matrices here always have.
fn eig_jacobi(m: &DMatrix<Complex64>) -> Result<SpectralDecomposition> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            let eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&x, &y| eigenvalues[x].total_cmp(&eigenvalues[y]));
            let sorted: Vec<f64> = order.iter().map(|&j| eigenvalues[j]).collect();
            let mut vectors = DMatrix::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                vectors.set_column(dst, &v.column(src));
            }
            return Ok(SpectralDecomposition {
                eigenvalues: sorted,
                eigenvectors: vectors,
            });
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let beta_abs = beta.norm();
                if beta_abs <= stop * 1e-2 {
                    continue;
                }
                let w = beta / Complex64::new(beta_abs, 0.0);
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * beta_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U columns: (c, -s conj(w)) and (s, c conj(w))
                let (u11, u21) = (Complex64::new(c, 0.0), -w.conj() * s);
                let (u12, u22) = (Complex64::new(s, 0.0), w.conj() * c);

                // A <- U* A U, applied as column then row transform
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u11 + akq * u21;
                    a[(k, q)] = akp * u12 + akq * u22;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u11.conj() * apk + u21.conj() * aqk;
                    a[(q, k)] = u12.conj() * apk + u22.conj() * aqk;
                }
                // restore exactness on the annihilated pair
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u11 + vkq * u21;
                    v[(k, q)] = vkp * u12 + vkq * u22;
                }
            }
        }
    }
    Err(Error::EigFailed(n))
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
///
/// For `[[a, b], [conj(b), c]]` the eigenvalues are
/// `(a + c)/2 -+ sqrt(((a - c)/2)^2 + |b|^2)`; the eigenvector branch is
/// chosen to avoid cancellation.
fn eig2(m: &DMatrix<Complex64>) -> SpectralDecomposition {
    let a = m[(0, 0)].re;
    let c = m[(1, 1)].re;
    let b = m[(0, 1)];
    let half_tr = 0.5 * (a + c);
    let delta = 0.5 * (a - c);
    let r = (delta * delta + b.norm_sqr()).sqrt();
    let (lo, hi) = (half_tr - r, half_tr + r);

    let mut vectors = DMatrix::<Complex64>::zeros(2, 2);
    if r <= f64::EPSILON * f64::max(1.0, half_tr.abs()) {
        // scalar multiple of the identity
        vectors[(0, 0)] = Complex64::ONE;
        vectors[(1, 1)] = Complex64::ONE;
    } else {
        // eigenvector for the larger eigenvalue
        let (x, y) = if delta >= 0.0 {
            (Complex64::new(delta + r, 0.0), b.conj())
        } else {
            (b, Complex64::new(r - delta, 0.0))
        };
        let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (x, y) = (x / norm, y / norm);
        vectors[(0, 1)] = x;
        vectors[(1, 1)] = y;
        // orthogonal partner for the smaller eigenvalue
        vectors[(0, 0)] = -y.conj();
        vectors[(1, 0)] = x.conj();
    }
    SpectralDecomposition {
        eigenvalues: vec![lo, hi],
        eigenvectors: vectors,
    }
}
