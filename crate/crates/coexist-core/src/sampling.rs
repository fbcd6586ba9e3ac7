//! Seeded random generators for matrices, projections, and qubit effects.
//!
//! Used by the test suites and benchmarks; kept in the library so that every
//! crate in the workspace samples from identical distributions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::effects::Effect;
use crate::matrix::HermitianMatrix;
use crate::qubit::BlochEffect;

/// Deterministic RNG for reproducible test ensembles.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(r: &mut impl Rng) -> f64 {
    // Box-Muller; rand_distr is overkill for this one distribution
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn ginibre(dim: usize, r: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(standard_normal(r), standard_normal(r))
    })
}

/// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary(dim: usize, r: &mut impl Rng) -> DMatrix<Complex64> {
    let g = ginibre(dim, r);
    // Gram-Schmidt keeps full control over column phases
    let mut q = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let mut v: DVector<Complex64> = g.column(j).into();
        for k in 0..j {
            let qk = q.column(k);
            let overlap = qk.dotc(&v);
            v -= DVector::from(qk) * overlap;
        }
        let norm = v.norm();
        q.set_column(j, &(v / Complex64::new(norm, 0.0)));
    }
    q
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, r: &mut impl Rng) -> HermitianMatrix {
    HermitianMatrix::symmetrize(ginibre(dim, r))
}

/// Random orthogonal projection of the given rank.
pub fn random_projection(dim: usize, rank: usize, r: &mut impl Rng) -> Effect {
    assert!(rank <= dim, "rank must not exceed dimension");
    let u = random_unitary(dim, r);
    let mut diag = vec![0.0; dim];
    for d in diag.iter_mut().take(rank) {
        *d = 1.0;
    }
    let p = &u * DMatrix::from_diagonal(&DVector::from_vec(
        diag.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    )) * u.adjoint();
    Effect::new_unchecked(HermitianMatrix::symmetrize(p))
}

/// Random projection with rank drawn uniformly from `1..dim`.
pub fn random_projection_any_rank(dim: usize, r: &mut impl Rng) -> Effect {
    let rank = r.gen_range(1..dim.max(2));
    random_projection(dim, rank.min(dim), r)
}

/// Random effect with spectrum drawn uniformly from [0, 1].
pub fn random_effect(dim: usize, r: &mut impl Rng) -> Effect {
    let u = random_unitary(dim, r);
    let diag: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(r.gen_range(0.0..=1.0), 0.0))
        .collect();
    let m = &u * DMatrix::from_diagonal(&DVector::from_vec(diag)) * u.adjoint();
    Effect::new_unchecked(HermitianMatrix::symmetrize(m))
}

/// Random qubit effect: the Bloch vector is uniform in the unit ball and the
/// bias is then uniform in its admissible interval `[|a|, 2 - |a|]`, covering
/// biased and boundary regions.
pub fn random_bloch_effect(r: &mut impl Rng) -> BlochEffect {
    let a = loop {
        let cand = [
            r.gen_range(-1.0..=1.0),
            r.gen_range(-1.0..=1.0),
            r.gen_range(-1.0..=1.0),
        ];
        let n2: f64 = cand.iter().map(|x| x * x).sum();
        if n2 <= 1.0 {
            break cand;
        }
    };
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let alpha = r.gen_range(norm..=(2.0 - norm));
    BlochEffect::new_unchecked(alpha, a)
}

/// Random effect inside a two-projection algebra: an independent random qubit
/// effect on each angle block and a uniform scalar on each nonempty commuting
/// subspace.
pub fn random_block_effect(
    d: &crate::halmos::TwoProjectionDecomposition,
    r: &mut impl Rng,
) -> Effect {
    let blocks = (0..d.thetas().len())
        .map(|_| {
            crate::qubit::from_bloch(&random_bloch_effect(r))
                .into_matrix()
        })
        .collect();
    let mut scalars = [None; 4];
    for (g, scalar) in scalars.iter_mut().enumerate() {
        if d.comm_split()[g] > 0 {
            *scalar = Some(r.gen_range(0.0..=1.0));
        }
    }
    let m = crate::halmos::reconstruct(
        &crate::halmos::BlockFunction { blocks, scalars },
        d,
    )
    .expect("block shapes match the decomposition");
    Effect::new_unchecked(m)
}

/// Random unit vector in `C^dim`.
pub fn random_unit_vector(dim: usize, r: &mut impl Rng) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(standard_normal(r), standard_normal(r))
    });
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}
