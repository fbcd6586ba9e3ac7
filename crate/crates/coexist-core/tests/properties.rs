//! Property tests: spectral-calculus invariants, algebra closure under the
//! structure isomorphism, and the behaviour of coexistence conditions on
//! random ensembles.

use coexist_core::halmos::in_algebra;
use coexist_core::sampling::{
    random_block_effect, random_effect, random_hermitian,
    random_projection, rng,
};
use coexist_core::{
    block_of, bracket, c_function, commute, comparable, decompose, feasibility_oracle, from_bloch,
    gen_inf, ginf_condition, coexistent_in_algebra, to_bloch, BlochEffect, Decision, Effect,
    HermitianMatrix,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn bloch_strategy() -> impl Strategy<Value = BlochEffect> {
    // direction from a cube point, radius and bias chosen admissibly
    (
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
    )
        .prop_map(|(x, y, z, radius, bias)| {
            let norm = (x * x + y * y + z * z).sqrt();
            let a = if norm < 1e-12 {
                [0.0, 0.0, 0.0]
            } else {
                let r = radius / norm;
                [x * r, y * r, z * r]
            };
            let len = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            let alpha = len + bias * (2.0 - 2.0 * len);
            BlochEffect::new_unchecked(alpha, a)
        })
}

proptest! {
    #[test]
    fn c_function_symmetry_is_exact(a in bloch_strategy(), b in bloch_strategy()) {
        let ab = c_function(&a, &b).unwrap();
        let ba = c_function(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn c_function_complement_invariance(a in bloch_strategy(), b in bloch_strategy()) {
        let base = c_function(&a, &b).unwrap();
        let scale = 1.0 + base.abs();
        prop_assert!((base - c_function(&a.complement(), &b).unwrap()).abs() <= 1e-12 * scale);
        prop_assert!((base - c_function(&a, &b.complement()).unwrap()).abs() <= 1e-12 * scale);
        prop_assert!(
            (base - c_function(&a.complement(), &b.complement()).unwrap()).abs() <= 1e-12 * scale
        );
    }

    #[test]
    fn bloch_roundtrip_is_identity(b in bloch_strategy()) {
        let rt = to_bloch(&from_bloch(&b)).unwrap();
        prop_assert!((b.alpha - rt.alpha).abs() <= 1e-10);
        for k in 0..3 {
            prop_assert!((b.a[k] - rt.a[k]).abs() <= 1e-10);
        }
    }

    #[test]
    fn brackets_of_projections_vanish(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let norm = (x * x + y * y + z * z).sqrt();
        prop_assume!(norm > 1e-6);
        let p = BlochEffect::new_unchecked(1.0, [x / norm, y / norm, z / norm]);
        prop_assert!(bracket(&p, &p).abs() <= 1e-12);
    }
}

#[test]
fn eig_reconstructs_over_random_ensemble() {
    let mut r = rng(101);
    for dim in 2..=8 {
        for _ in 0..25 {
            let m = random_hermitian(dim, &mut r);
            let eig = m.eig().unwrap();
            let residual_scale = 1e-10 * (1.0 + m.max_abs_entry());
            let diff = eig.reconstruct().sub(&m).unwrap().max_abs_entry();
            assert!(diff <= residual_scale, "dim {dim}: residual {diff:.3e}");
        }
    }
}

#[test]
fn abs_squares_to_square() {
    let mut r = rng(103);
    for dim in 2..=8 {
        for _ in 0..(100 / 7 + 1) {
            let m = random_hermitian(dim, &mut r);
            let abs = m.abs().unwrap();
            let lhs = HermitianMatrix::symmetrize(abs.raw() * abs.raw());
            let rhs = HermitianMatrix::symmetrize(m.raw() * m.raw());
            assert!(lhs.approx_eq(&rhs, 1e-9));
        }
    }
}

#[test]
fn identity_function_is_identity_on_spectrum() {
    let mut r = rng(105);
    for _ in 0..30 {
        let m = random_hermitian(5, &mut r);
        assert!(m.apply_spectral(|x| x).unwrap().approx_eq(&m, 1e-10));
    }
}

#[test]
fn psd_cone_is_closed_under_addition() {
    let mut r = rng(107);
    for _ in 0..50 {
        let a = random_effect(4, &mut r);
        let b = random_effect(4, &mut r);
        let sum = a.matrix().add(b.matrix()).unwrap();
        assert!(sum.is_psd(1e-10).unwrap());
    }
}

#[test]
fn decomposition_invariants_on_random_pairs() {
    let mut r = rng(109);
    for _ in 0..200 {
        let dim = r.gen_range(2..=10);
        let rank1 = r.gen_range(1..dim.max(2));
        let rank2 = r.gen_range(1..dim.max(2));
        let p1 = random_projection(dim, rank1, &mut r);
        let p2 = random_projection(dim, rank2, &mut r);
        let d = decompose(&p1, &p2, 1e-9).unwrap();

        let pair_dims: usize = d.thetas().iter().map(|&(_, m)| 2 * m).sum();
        let split_dims: usize = d.comm_split().iter().sum();
        assert_eq!(pair_dims + split_dims, dim, "dimension bookkeeping");
        for &(theta, _) in d.thetas() {
            assert!(theta > 0.0 && theta < std::f64::consts::PI);
        }
        assert!(d.unitarity_defect() <= 1e-10);
        assert!(d.verify(&p1, &p2) <= 1e-9);
    }
}

#[test]
fn partner_expectation_matches_angle() {
    let mut r = rng(111);
    for _ in 0..50 {
        let dim = r.gen_range(3..=8);
        let p1 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let p2 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let d = decompose(&p1, &p2, 1e-9).unwrap();
        let q2 = if d.swapped() { &p1 } else { &p2 };
        let mut col = 0;
        for &(theta, mult) in d.thetas() {
            for _ in 0..mult {
                let f = d.canonical_basis().column(col + 1);
                let val = (f.adjoint() * q2.matrix().raw() * f)[(0, 0)].re;
                assert!((val - (0.5 * theta).sin().powi(2)).abs() <= 1e-9);
                col += 2;
            }
        }
    }
}

#[test]
fn algebra_is_closed_under_linear_and_jordan_products() {
    let mut r = rng(113);
    for _ in 0..40 {
        let dim = r.gen_range(2..=8);
        let p1 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let p2 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let d = decompose(&p1, &p2, 1e-9).unwrap();
        let a = random_block_effect(&d, &mut r);
        let b = random_block_effect(&d, &mut r);
        assert!(in_algebra(a.matrix(), &d, 1e-8).unwrap());
        assert!(in_algebra(b.matrix(), &d, 1e-8).unwrap());

        let lin = a.matrix().scale(0.3).add(&b.matrix().scale(-1.2)).unwrap();
        assert!(in_algebra(&lin, &d, 1e-8).unwrap());

        let jordan = HermitianMatrix::symmetrize(
            a.matrix().raw() * b.matrix().raw() + b.matrix().raw() * a.matrix().raw(),
        );
        assert!(in_algebra(&jordan, &d, 1e-8).unwrap());
    }
}

#[test]
fn block_map_is_a_homomorphism() {
    let mut r = rng(115);
    for _ in 0..30 {
        let dim = r.gen_range(2..=8);
        let p1 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let p2 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let d = decompose(&p1, &p2, 1e-9).unwrap();
        let a = random_block_effect(&d, &mut r);

        let square = HermitianMatrix::symmetrize(a.matrix().raw() * a.matrix().raw());
        let blocks_of_square = block_of(&square, &d, 1e-8).unwrap();
        let blocks = block_of(a.matrix(), &d, 1e-8).unwrap();
        for (sq, blk) in blocks_of_square.blocks.iter().zip(&blocks.blocks) {
            let direct = HermitianMatrix::symmetrize(blk.raw() * blk.raw());
            assert!(sq.approx_eq(&direct, 1e-9), "M_(A^2) = (M_A)^2 per block");
        }

        // spectral calculus commutes with the block map, f(x) = x^2 and sqrt
        for f in [|x: f64| x * x, |x: f64| x.max(0.0).sqrt()] {
            let f_a = a.matrix().apply_spectral(f).unwrap();
            let blocks_f = block_of(&f_a, &d, 1e-7).unwrap();
            for (lhs, blk) in blocks_f.blocks.iter().zip(&blocks.blocks) {
                let rhs = blk.apply_spectral(f).unwrap();
                assert!(lhs.approx_eq(&rhs, 1e-8), "f(M_A) per block");
            }
        }
    }
}

#[test]
fn sufficient_conditions_imply_coexistent_verdict() {
    let mut r = rng(117);
    let mut commuting_seen = 0;
    let mut comparable_seen = 0;
    let mut ginf_seen = 0;
    for _ in 0..150 {
        let dim = r.gen_range(2..=6);
        let p1 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let p2 = random_projection(dim, r.gen_range(1..dim), &mut r);
        let d = decompose(&p1, &p2, 1e-9).unwrap();
        let a = random_block_effect(&d, &mut r);
        // bias towards comparability: sometimes shrink b below a
        let b = if r.gen_bool(0.3) {
            Effect::new(a.matrix().scale(r.gen_range(0.0..1.0))).unwrap()
        } else {
            random_block_effect(&d, &mut r)
        };
        let verdict = coexistent_in_algebra(&a, &b, &d, 1e-9).unwrap();
        if commute(&a, &b, 1e-10).unwrap() {
            commuting_seen += 1;
            assert_eq!(verdict.decision, Decision::Coexistent, "commuting pair");
        }
        if comparable(&a, &b, 1e-12).unwrap() {
            comparable_seen += 1;
            assert_eq!(verdict.decision, Decision::Coexistent, "comparable pair");
        }
        if ginf_condition(&a, &b, 1e-12).unwrap() {
            ginf_seen += 1;
            assert_eq!(verdict.decision, Decision::Coexistent, "GINF pair");
        }
    }
    assert!(comparable_seen > 10, "ensemble exercised comparability");
    assert!(ginf_seen > 10, "ensemble exercised GINF");
    eprintln!(
        "sufficiency chain: commuting {commuting_seen}, comparable {comparable_seen}, ginf {ginf_seen}"
    );
}

#[test]
fn direct_sums_coexist_componentwise() {
    let mut r = rng(119);
    let mut feasible_seen = 0;
    let mut infeasible_seen = 0;
    for _ in 0..40 {
        let a1 = random_effect(2, &mut r);
        let b1 = random_effect(2, &mut r);
        let a2 = random_effect(2, &mut r);
        let b2 = random_effect(2, &mut r);
        let direct_sum = |x: &Effect, y: &Effect| {
            let mut m = DMatrix::<Complex64>::zeros(4, 4);
            m.view_mut((0, 0), (2, 2)).copy_from(x.matrix().raw());
            m.view_mut((2, 2), (2, 2)).copy_from(y.matrix().raw());
            Effect::new_unchecked(HermitianMatrix::new(m).unwrap())
        };
        let a = direct_sum(&a1, &a2);
        let b = direct_sum(&b1, &b2);

        let part1 = feasibility_oracle(&a1, &b1, 1e-9, 20_000).unwrap();
        let part2 = feasibility_oracle(&a2, &b2, 1e-9, 20_000).unwrap();
        let whole = feasibility_oracle(&a, &b, 1e-9, 20_000).unwrap();
        // skip undecidable boundary cases: all three runs must be clearly
        // resolved for the equivalence to be assertable numerically
        let clear = |res: &coexist_core::FeasibilityResult| {
            res.feasible || res.residual > 1e-7
        };
        if clear(&part1) && clear(&part2) && clear(&whole) {
            assert_eq!(
                whole.feasible,
                part1.feasible && part2.feasible,
                "direct sum feasibility must match componentwise feasibility"
            );
            if whole.feasible {
                feasible_seen += 1;
            } else {
                infeasible_seen += 1;
            }
        }
    }
    assert!(feasible_seen > 3 && infeasible_seen > 3, "both outcomes exercised");
}

#[test]
fn oracle_points_satisfy_all_constraints() {
    let mut r = rng(121);
    for _ in 0..30 {
        let dim = r.gen_range(2..=5);
        let a = random_effect(dim, &mut r);
        let b = random_effect(dim, &mut r);
        let res = feasibility_oracle(&a, &b, 1e-9, 20_000).unwrap();
        if res.feasible {
            let g = res.g.expect("feasible result carries its point");
            let lower = a
                .matrix()
                .add(b.matrix())
                .unwrap()
                .sub(&HermitianMatrix::identity(dim))
                .unwrap();
            for (m, name) in [
                (g.clone(), "G >= 0"),
                (a.matrix().sub(&g).unwrap(), "G <= A"),
                (b.matrix().sub(&g).unwrap(), "G <= B"),
                (g.sub(&lower).unwrap(), "G >= A + B - 1"),
            ] {
                let neg = (-m.eig().unwrap().lambda_min()).max(0.0);
                assert!(neg <= 1e-9, "{name} violated by {neg:.3e}");
            }
        }
    }
}

#[test]
fn gen_inf_commutes_with_argument_swap_in_ginf() {
    let mut r = rng(123);
    for _ in 0..60 {
        let a = random_effect(3, &mut r);
        let b = random_effect(3, &mut r);
        assert_eq!(
            gen_inf(&a, &b).unwrap().raw(),
            gen_inf(&b, &a).unwrap().raw()
        );
        assert_eq!(
            ginf_condition(&a, &b, 1e-9).unwrap(),
            ginf_condition(&b, &a, 1e-9).unwrap()
        );
    }
}
