//! Canonical decomposition of the von Neumann algebra generated by two
//! projections.
//!
//! For projections `P1`, `P2` on an n-dimensional space, the support `K` of
//! the commutator `[P1, P2]` carries all noncommutativity. On `K` there is an
//! orthonormal basis of pairs `(e, f)` in which
//!
//! ```text
//! P1 -> [[1, 0], [0, 0]]            per pair,
//! P2 -> [[cos^2(t/2),  sin(t)/2],
//!        [sin(t)/2,    sin^2(t/2)]] per pair,
//! ```
//!
//! with the angle `t` ranging over the spectrum of the angle operator
//! `Theta = arccos(2H - 1)`, `H = P1 P2 P1` restricted to the subspace
//! `K0 = {x in K : P1 x = x}`. The orthocomplement of `K` splits into four
//! joint eigenspaces of `(P1, P2)` on which every algebra element is scalar.
//! An operator belongs to the algebra iff, in this basis, it is block diagonal
//! with equal 2x2 blocks across the multiplicity of each angle and scalar on
//! the four commuting subspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::matrix::{max_abs, HermitianMatrix};
use crate::tol;

/// Canonical data of a projection pair: angles with multiplicities, the
/// basis realizing the 2x2 block form, and the four-way split of the
/// commutation domain.
#[derive(Debug, Clone)]
pub struct TwoProjectionDecomposition {
    dim: usize,
    thetas: Vec<(f64, usize)>,
    canonical_basis: DMatrix<Complex64>,
    comm_split: [usize; 4],
    swapped: bool,
}

/// Image of an algebra element under the structure isomorphism: one 2x2 block
/// per distinct angle plus a scalar on each nonempty commuting subspace.
#[derive(Debug, Clone)]
pub struct BlockFunction {
    /// `M_A(theta_j)`, ordered like the decomposition's `thetas`.
    pub blocks: Vec<HermitianMatrix>,
    /// Values on the `(1,1), (1,0), (0,1), (0,0)` subspaces; `None` where the
    /// subspace is zero-dimensional.
    pub scalars: [Option<f64>; 4],
}

fn check_projection(p: &Effect, tol_proj: f64) -> Result<()> {
    let eig = p.matrix().eig()?;
    for &l in eig.eigenvalues() {
        if f64::min(l.abs(), (1.0 - l).abs()) > tol_proj {
            return Err(Error::NotAProjection(l));
        }
    }
    Ok(())
}

/// `B* M B` for an orthonormal column block `B`.
fn restrict(basis: &DMatrix<Complex64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    basis.adjoint() * m * basis
}

/// The central element `C = 1 - (P1 - P2)^2` of the two-projection algebra.
///
/// The result is verified against both product factorizations
/// `P1 P2 P1 + P1p P2p P1p` and `P2 P1 P2 + P2p P1p P2p`; a mismatch beyond
/// tolerance means the inputs were not projections.
pub fn central_element(p1: &Effect, p2: &Effect) -> Result<HermitianMatrix> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch(p1.dim(), p2.dim()));
    }
    check_projection(p1, tol::EFF)?;
    check_projection(p2, tol::EFF)?;
    let m1 = p1.matrix().raw();
    let m2 = p2.matrix().raw();
    let diff = m1 - m2;
    let id = DMatrix::<Complex64>::identity(p1.dim(), p1.dim());
    let c = HermitianMatrix::symmetrize(&id - &diff * &diff);

    let m1p = &id - m1;
    let m2p = &id - m2;
    let fact1 = m1 * m2 * m1 + &m1p * &m2p * &m1p;
    let fact2 = m2 * m1 * m2 + &m2p * &m1p * &m2p;
    for fact in [fact1, fact2] {
        let defect = max_abs(&(c.raw() - &fact));
        if defect > tol::RECON * f64::max(1.0, c.max_abs_entry()) {
            return Err(Error::NotAProjection(defect));
        }
    }
    Ok(c)
}

struct CommutatorSplit {
    support: DMatrix<Complex64>,
    kernel: DMatrix<Complex64>,
}

/// Splits the space into the support of `[P1, P2]` and its kernel, via the
/// eigendecomposition of the Hermitian matrix `i [P1, P2]`.
fn split_commutator(
    p1: &HermitianMatrix,
    p2: &HermitianMatrix,
    tol_kernel: f64,
) -> Result<CommutatorSplit> {
    let n = p1.dim();
    let k = p1.raw() * p2.raw() - p2.raw() * p1.raw();
    let ik = HermitianMatrix::symmetrize(k * Complex64::i());
    let eig = ik.eig()?;
    let sigma_max = f64::max(eig.lambda_min().abs(), eig.lambda_max().abs());
    // relative cutoff against the largest singular value; if the commutator
    // vanishes entirely the whole space is the kernel
    let cutoff = if sigma_max <= tol_kernel {
        f64::INFINITY
    } else {
        tol_kernel * sigma_max
    };
    let mut support_cols = Vec::new();
    let mut kernel_cols = Vec::new();
    for (j, &mu) in eig.eigenvalues().iter().enumerate() {
        if mu.abs() <= cutoff {
            kernel_cols.push(j);
        } else {
            support_cols.push(j);
        }
    }
    let take = |cols: &[usize]| {
        let mut m = DMatrix::<Complex64>::zeros(n, cols.len());
        for (dst, &src) in cols.iter().enumerate() {
            m.set_column(dst, &eig.eigenvectors().column(src));
        }
        m
    };
    Ok(CommutatorSplit {
        support: take(&support_cols),
        kernel: take(&kernel_cols),
    })
}

/// Orthonormal basis of the commutation domain `ker([P1, P2])`.
pub fn commutation_kernel(p1: &Effect, p2: &Effect, tol: f64) -> Result<DMatrix<Complex64>> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch(p1.dim(), p2.dim()));
    }
    check_projection(p1, tol.max(tol::EFF))?;
    check_projection(p2, tol.max(tol::EFF))?;
    Ok(split_commutator(p1.matrix(), p2.matrix(), tol)?.kernel)
}

/// Builds the canonical decomposition for a projection pair.
///
/// `tol` is used for the projection test, the commutator kernel cutoff, and
/// the degenerate-angle guard. Eigenvalues of `H` within `tol` of 0 or 1
/// inside the commutator support are inconsistent with the decomposition and
/// raise [`Error::DegenerateAngle`].
pub fn decompose(p1: &Effect, p2: &Effect, tol: f64) -> Result<TwoProjectionDecomposition> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch(p1.dim(), p2.dim()));
    }
    let n = p1.dim();
    let tol_proj = tol.max(tol::EFF);
    check_projection(p1, tol_proj)?;
    check_projection(p2, tol_proj)?;

    let split = split_commutator(p1.matrix(), p2.matrix(), tol)?;
    let k = split.support.ncols();
    if k % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "commutator support has odd dimension {k}"
        )));
    }

    // Construct from the projection of smaller rank on K; the restricted
    // ranks are provably equal, so the tie-break keeps the original order.
    let (q1, q2, swapped) = if k > 0 {
        let r1 = restrict(&split.support, p1.matrix().raw()).trace().re;
        let r2 = restrict(&split.support, p2.matrix().raw()).trace().re;
        if r1.round() as usize <= r2.round() as usize {
            (p1, p2, false)
        } else {
            (p2, p1, true)
        }
    } else {
        (p1, p2, false)
    };

    // K0 = range of q1 restricted to K
    let mut pair_columns: Vec<(f64, DVector<Complex64>, DVector<Complex64>)> = Vec::new();
    if k > 0 {
        let r1 = HermitianMatrix::symmetrize(restrict(&split.support, q1.matrix().raw()));
        let r1_eig = r1.eig()?;
        let mut basis0_cols = Vec::new();
        for (j, &l) in r1_eig.eigenvalues().iter().enumerate() {
            if (l - l.round()).abs() > 0.1 {
                return Err(Error::ShapeMismatch(format!(
                    "restriction of a projection to the commutator support has eigenvalue {l}"
                )));
            }
            if l > 0.5 {
                basis0_cols.push(j);
            }
        }
        let m = basis0_cols.len();
        if 2 * m != k {
            return Err(Error::ShapeMismatch(format!(
                "K0 dimension {m} does not match half of dim K = {k}"
            )));
        }
        let mut basis0 = DMatrix::<Complex64>::zeros(n, m);
        for (dst, &src) in basis0_cols.iter().enumerate() {
            basis0.set_column(dst, &(&split.support * r1_eig.eigenvectors().column(src)));
        }

        // H = P1 P2 P1 restricted to K0; the sandwich reduces to B0* P2 B0
        let h = HermitianMatrix::symmetrize(restrict(&basis0, q2.matrix().raw()));
        let h_eig = h.eig()?;
        for (j, &hval) in h_eig.eigenvalues().iter().enumerate() {
            if hval < tol || hval > 1.0 - tol {
                return Err(Error::DegenerateAngle(hval));
            }
            let e = &basis0 * h_eig.eigenvectors().column(j);
            // partner f = P1_perp P2 e / |..|, which makes <f|P2 e> = sin(t)/2 > 0
            let v = q2.matrix().raw() * &e;
            let f_unnorm = &v - q1.matrix().raw() * &v;
            let norm = f_unnorm.norm();
            let f = f_unnorm / Complex64::new(norm, 0.0);
            pair_columns.push((hval, e, f));
        }
        // theta ascending means h descending
        pair_columns.sort_by(|a, b| b.0.total_cmp(&a.0));
    }

    // cluster equal angles
    let h_norm = pair_columns
        .iter()
        .map(|(h, _, _)| h.abs())
        .fold(0.0, f64::max);
    let cluster_gap = tol::CLUSTER * h_norm;
    let mut thetas: Vec<(f64, usize)> = Vec::new();
    let mut cluster_members: Vec<Vec<usize>> = Vec::new();
    for (idx, (h, _, _)) in pair_columns.iter().enumerate() {
        let split_new = match cluster_members.last() {
            Some(members) => {
                let last_h = pair_columns[*members.last().expect("nonempty cluster")].0;
                (last_h - h).abs() > cluster_gap
            }
            None => true,
        };
        if split_new {
            cluster_members.push(vec![idx]);
        } else {
            cluster_members.last_mut().expect("just pushed").push(idx);
        }
    }
    for members in &cluster_members {
        let mean_h: f64 =
            members.iter().map(|&i| pair_columns[i].0).sum::<f64>() / members.len() as f64;
        let theta = (2.0 * mean_h - 1.0).acos();
        thetas.push((theta, members.len()));
    }

    // four-way split of the commutation domain into joint eigenspaces of
    // (P1, P2); eigenvalues of 2 P1 + P2 there sit near {0, 1, 2, 3} and are
    // always labelled by the original, unswapped pair
    let dperp = split.kernel.ncols();
    let mut group_cols: [Vec<DVector<Complex64>>; 4] = Default::default();
    if dperp > 0 {
        let joint = HermitianMatrix::symmetrize(
            restrict(&split.kernel, p1.matrix().raw()).scale(2.0)
                + restrict(&split.kernel, p2.matrix().raw()),
        );
        let eig = joint.eig()?;
        for (j, &l) in eig.eigenvalues().iter().enumerate() {
            let code = l.round();
            if (l - code).abs() > 0.25 || !(0.0..=3.0).contains(&code) {
                return Err(Error::ShapeMismatch(format!(
                    "commutation-domain joint eigenvalue {l} is not near an integer code"
                )));
            }
            // code 3 -> (1,1), 2 -> (1,0), 1 -> (0,1), 0 -> (0,0)
            let group = (3 - code as usize).min(3);
            group_cols[group].push(&split.kernel * eig.eigenvectors().column(j));
        }
    }
    let comm_split = [
        group_cols[0].len(),
        group_cols[1].len(),
        group_cols[2].len(),
        group_cols[3].len(),
    ];

    // assemble the canonical basis: angle pairs first, then the four groups
    let mut basis = DMatrix::<Complex64>::zeros(n, n);
    let mut col = 0;
    for members in &cluster_members {
        for &i in members {
            basis.set_column(col, &pair_columns[i].1);
            basis.set_column(col + 1, &pair_columns[i].2);
            col += 2;
        }
    }
    for group in &group_cols {
        for v in group {
            basis.set_column(col, v);
            col += 1;
        }
    }
    debug_assert_eq!(col, n);

    Ok(TwoProjectionDecomposition {
        dim: n,
        thetas,
        canonical_basis: basis,
        comm_split,
        swapped,
    })
}

impl TwoProjectionDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Distinct angles in `(0, pi)`, ascending, with multiplicities.
    pub fn thetas(&self) -> &[(f64, usize)] {
        &self.thetas
    }

    /// Dimensions of the `(1,1), (1,0), (0,1), (0,0)` joint eigenspaces of the
    /// commutation domain, labelled by the original projection order.
    pub fn comm_split(&self) -> [usize; 4] {
        self.comm_split
    }

    /// Whether the construction exchanged the roles of the projections.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn canonical_basis(&self) -> &DMatrix<Complex64> {
        &self.canonical_basis
    }

    /// Number of `(e, f)` pairs, i.e. half the dimension of the commutator
    /// support.
    pub fn total_pairs(&self) -> usize {
        self.thetas.iter().map(|(_, m)| m).sum()
    }

    /// Spectrum of `H = cos^2(Theta / 2)`, one value per distinct angle.
    pub fn spec_h(&self) -> Vec<f64> {
        self.thetas
            .iter()
            .map(|(theta, _)| (0.5 * theta).cos().powi(2))
            .collect()
    }

    /// Column offset of the pair block for the `j`-th distinct angle.
    fn theta_offset(&self, j: usize) -> usize {
        2 * self
            .thetas
            .iter()
            .take(j)
            .map(|(_, m)| m)
            .sum::<usize>()
    }

    /// Column offset of commutation-domain group `g`.
    fn group_offset(&self, g: usize) -> usize {
        2 * self.total_pairs() + self.comm_split.iter().take(g).sum::<usize>()
    }

    /// Conjugates into canonical coordinates, `U* M U`.
    pub fn to_canonical(&self, m: &HermitianMatrix) -> DMatrix<Complex64> {
        restrict(&self.canonical_basis, m.raw())
    }

    /// Largest deviation of the basis from unitarity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.canonical_basis.adjoint() * &self.canonical_basis;
        max_abs(&(gram - DMatrix::<Complex64>::identity(self.dim, self.dim)))
    }

    /// Largest entrywise deviation of the projections, in canonical
    /// coordinates, from their exact canonical forms.
    pub fn verify(&self, p1: &Effect, p2: &Effect) -> f64 {
        let (q1, q2) = if self.swapped { (p2, p1) } else { (p1, p2) };
        let c1 = self.to_canonical(q1.matrix());
        let c2 = self.to_canonical(q2.matrix());
        let mut expected1 = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        let mut expected2 = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        let mut col = 0;
        for &(theta, mult) in &self.thetas {
            let (s, c) = theta.sin_cos();
            for _ in 0..mult {
                expected1[(col, col)] = Complex64::ONE;
                expected2[(col, col)] = Complex64::new(0.5 * (1.0 + c), 0.0);
                expected2[(col, col + 1)] = Complex64::new(0.5 * s, 0.0);
                expected2[(col + 1, col)] = Complex64::new(0.5 * s, 0.0);
                expected2[(col + 1, col + 1)] = Complex64::new(0.5 * (1.0 - c), 0.0);
                col += 2;
            }
        }
        // group values for (q1, q2): if swapped, the original group labels
        // (1,0) and (0,1) exchange roles
        let values1 = [1.0, 1.0, 0.0, 0.0];
        let values2 = [1.0, 0.0, 1.0, 0.0];
        for g in 0..4 {
            let (v1, v2) = if self.swapped {
                (values2[g], values1[g])
            } else {
                (values1[g], values2[g])
            };
            for _ in 0..self.comm_split[g] {
                expected1[(col, col)] = Complex64::new(v1, 0.0);
                expected2[(col, col)] = Complex64::new(v2, 0.0);
                col += 1;
            }
        }
        f64::max(
            max_abs(&(&c1 - expected1)),
            max_abs(&(&c2 - expected2)),
        )
    }
}

/// Largest entry of `U* A U` violating the algebra's block structure:
/// off-block entries, unequal blocks within one angle's multiplicity, or
/// non-scalar action on a commutation-domain group.
fn membership_defect(a: &HermitianMatrix, d: &TwoProjectionDecomposition) -> Result<f64> {
    if a.dim() != d.dim {
        return Err(Error::DimensionMismatch(a.dim(), d.dim));
    }
    let canon = d.to_canonical(a);
    let n = d.dim;
    let pair_cols = 2 * d.total_pairs();
    let mut defect = 0.0f64;

    // block membership map: for column c, the index of its 2x2 pair block, or
    // the commutation group offset by 100
    let region = |c: usize| -> usize {
        if c < pair_cols {
            c / 2
        } else {
            let mut off = pair_cols;
            for g in 0..4 {
                if c < off + d.comm_split[g] {
                    return 100 + g;
                }
                off += d.comm_split[g];
            }
            unreachable!("column out of range")
        }
    };

    for r in 0..n {
        for c in 0..n {
            let same_pair = region(r) == region(c) && region(r) < 100;
            let same_group_diag = r == c;
            if !same_pair && !same_group_diag {
                defect = defect.max(canon[(r, c)].norm());
            }
        }
    }

    // equal blocks across each angle's multiplicity
    for (j, &(_, mult)) in d.thetas.iter().enumerate() {
        let off = d.theta_offset(j);
        for copy in 1..mult {
            let o = off + 2 * copy;
            for r in 0..2 {
                for c in 0..2 {
                    let diff = (canon[(o + r, o + c)] - canon[(off + r, off + c)]).norm();
                    defect = defect.max(diff);
                }
            }
        }
    }

    // scalar on each commutation group
    for g in 0..4 {
        let off = d.group_offset(g);
        for i in 0..d.comm_split[g] {
            let z = canon[(off + i, off + i)];
            defect = defect.max(z.im.abs());
            if i > 0 {
                defect = defect.max((z - canon[(off, off)]).norm());
            }
        }
    }

    Ok(defect)
}

/// Membership test for the two-projection algebra.
pub fn in_algebra(a: &HermitianMatrix, d: &TwoProjectionDecomposition, tol: f64) -> Result<bool> {
    let defect = membership_defect(a, d)?;
    Ok(defect <= tol * f64::max(1.0, a.max_abs_entry()))
}

/// Extracts the block function of an algebra element: the 2x2 block of each
/// distinct angle (first copy of the multiplicity group) and the scalar on
/// each nonempty commutation-domain group.
pub fn block_of(
    a: &HermitianMatrix,
    d: &TwoProjectionDecomposition,
    tol: f64,
) -> Result<BlockFunction> {
    let defect = membership_defect(a, d)?;
    if defect > tol * f64::max(1.0, a.max_abs_entry()) {
        return Err(Error::NotInAlgebra(defect));
    }
    let canon = d.to_canonical(a);
    let mut blocks = Vec::with_capacity(d.thetas.len());
    for j in 0..d.thetas.len() {
        let off = d.theta_offset(j);
        let block = DMatrix::from_fn(2, 2, |r, c| canon[(off + r, off + c)]);
        blocks.push(HermitianMatrix::symmetrize(block));
    }
    let mut scalars = [None; 4];
    for g in 0..4 {
        let dim_g = d.comm_split[g];
        if dim_g > 0 {
            let off = d.group_offset(g);
            let mean: f64 =
                (0..dim_g).map(|i| canon[(off + i, off + i)].re).sum::<f64>() / dim_g as f64;
            scalars[g] = Some(mean);
        }
    }
    Ok(BlockFunction { blocks, scalars })
}

/// Rebuilds the algebra element represented by a block function; inverse of
/// [`block_of`] on its range.
pub fn reconstruct(bf: &BlockFunction, d: &TwoProjectionDecomposition) -> Result<HermitianMatrix> {
    if bf.blocks.len() != d.thetas.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} blocks for {} distinct angles",
            bf.blocks.len(),
            d.thetas.len()
        )));
    }
    for (g, scalar) in bf.scalars.iter().enumerate() {
        if scalar.is_some() != (d.comm_split[g] > 0) {
            return Err(Error::ShapeMismatch(format!(
                "scalar presence for group {g} does not match subspace dimension {}",
                d.comm_split[g]
            )));
        }
    }
    let mut canon = DMatrix::<Complex64>::zeros(d.dim, d.dim);
    for (j, block) in bf.blocks.iter().enumerate() {
        if block.dim() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "block {j} has dimension {}",
                block.dim()
            )));
        }
        let off = d.theta_offset(j);
        for copy in 0..d.thetas[j].1 {
            let o = off + 2 * copy;
            for r in 0..2 {
                for c in 0..2 {
                    canon[(o + r, o + c)] = block.raw()[(r, c)];
                }
            }
        }
    }
    for g in 0..4 {
        if let Some(s) = bf.scalars[g] {
            let off = d.group_offset(g);
            for i in 0..d.comm_split[g] {
                canon[(off + i, off + i)] = Complex64::new(s, 0.0);
            }
        }
    }
    let full = &d.canonical_basis * canon * d.canonical_basis.adjoint();
    Ok(HermitianMatrix::symmetrize(full))
}
