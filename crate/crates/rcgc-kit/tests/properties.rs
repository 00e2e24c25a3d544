//! Randomized invariants of the evaluators.

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rcgc_kit::cli::parse::angle_value;
use rcgc_kit::geometry::{euler_from_points, mat_vec, rotation_matrix_zxz};
use rcgc_kit::halfint_algebra::{cgc, Triangle};
use rcgc_kit::oracle::cgc_exact;
use rcgc_kit::rcgc::{rcgc1_product_reduce, RcgcIndices};
use rcgc_kit::sphfun::{family_matrix, sphfun_named, sphfun_reduce, transform_tensor, Family};
use rcgc_kit::wigner::{wigner_d, wigner_d_hyp, wigner_d_matrix, EulerAngles};
use rcgc_kit::{CNum, HalfInt, SpherePoint};

fn rank(max_twice: i32) -> impl Strategy<Value = HalfInt> {
    (0..=max_twice).prop_map(HalfInt::from_twice)
}

/// A rank with one projection, chosen by index.
fn rank_and_projection(max_twice: i32) -> impl Strategy<Value = (HalfInt, HalfInt)> {
    rank(max_twice).prop_flat_map(|k| {
        (Just(k), 0..k.multiplicity()).prop_map(|(k, i)| (k, k.projections().nth(i).unwrap()))
    })
}

fn rank_and_two_projections(max_twice: i32) -> impl Strategy<Value = (HalfInt, HalfInt, HalfInt)> {
    rank(max_twice).prop_flat_map(|k| {
        let n = k.multiplicity();
        (Just(k), 0..n, 0..n).prop_map(|(k, i, j)| {
            (
                k,
                k.projections().nth(i).unwrap(),
                k.projections().nth(j).unwrap(),
            )
        })
    })
}

fn omega() -> impl Strategy<Value = EulerAngles> {
    (0.0..TAU, 0.0..=PI, 0.0..TAU).prop_map(|(a, b, c)| EulerAngles::new(a, b, c))
}

/// A point away from the poles, where only the doubly polar pair is degenerate.
fn point() -> impl Strategy<Value = SpherePoint> {
    (0.01..PI - 0.01, 0.0..TAU).prop_map(|(t, p)| SpherePoint::new(t, p).unwrap())
}

fn family() -> impl Strategy<Value = Family> {
    (0..Family::ALL.len()).prop_map(|i| Family::ALL[i])
}

fn max_unitarity_error(m: &[Vec<CNum>]) -> f64 {
    let n = m.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dot: CNum = (0..n).map(|r| m[r][a].conj() * m[r][b]).sum();
            worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn halfint_display_round_trips(twice in -40i32..=40) {
        let x = HalfInt::from_twice(twice);
        prop_assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
    }

    #[test]
    fn pi_fractions_parse(num in -12i32..=12, den in 1i32..=12) {
        let text = format!("{num}pi/{den}");
        let v = angle_value(&text).unwrap();
        prop_assert!((v - f64::from(num) * PI / f64::from(den)).abs() < 1e-15);
    }

    #[test]
    fn d_matrix_is_unitary(k in rank(12), o in omega()) {
        prop_assert!(max_unitarity_error(&wigner_d_matrix(k, o).unwrap()) < 1e-12);
    }

    #[test]
    fn d_is_bounded_by_one((k, q, qp) in rank_and_two_projections(16), o in omega()) {
        prop_assert!(wigner_d(k, q, qp, o).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn hypergeometric_form_matches_the_sum((k, q, qp) in rank_and_two_projections(9), o in omega()) {
        let a = wigner_d(k, q, qp, o).unwrap();
        let b = wigner_d_hyp(k, q, qp, o).unwrap();
        prop_assert!((a - b).norm() < 1e-11, "{} vs {}", a, b);
    }

    #[test]
    fn theta_shift_by_two_pi_gives_the_sign((k, q, qp) in rank_and_two_projections(8), o in omega()) {
        let shifted = EulerAngles::new(o.phi, o.theta + TAU, o.psi);
        let sign = if k.is_integer() { 1.0 } else { -1.0 };
        let d = wigner_d(k, q, qp, o).unwrap();
        prop_assert!((wigner_d(k, q, qp, shifted).unwrap() - d * sign).norm() < 1e-12);
    }

    #[test]
    fn euler_solutions_rotate_r1_onto_r2(x1 in point(), x2 in point()) {
        let sols = euler_from_points(x1, x2).unwrap();
        prop_assert!(!sols.is_empty());
        let target = x2.unit_vector();
        for s in sols {
            let v = mat_vec(&rotation_matrix_zxz(s.omega), x1.unit_vector());
            for i in 0..3 {
                prop_assert!((v[i] - target[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn families_equal_d_on_their_branch((k, q, qp) in rank_and_two_projections(6), x1 in point(), x2 in point()) {
        for s in euler_from_points(x1, x2).unwrap() {
            let d = wigner_d(k, q, qp, s.omega).unwrap();
            let spec = rcgc_kit::sphfun::SphFunSpec::new(s.branch, k, q, qp).unwrap();
            let f = rcgc_kit::sphfun::sphfun_general(&spec, x1, x2).unwrap();
            prop_assert!((d - f).norm() < 1e-12);
        }
    }

    #[test]
    fn family_matrices_are_unitary(k in rank(8), f in family(), x1 in point(), x2 in point()) {
        prop_assert!(max_unitarity_error(&family_matrix(f, k, x1, x2).unwrap()) < 1e-12);
    }

    #[test]
    fn tensor_transform_keeps_the_norm(
        k in rank(6),
        f in family(),
        x1 in point(),
        x2 in point(),
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7),
    ) {
        let comps: Vec<CNum> = raw.iter().take(k.multiplicity()).map(|&(a, b)| CNum::new(a, b)).collect();
        let out = transform_tensor(f, k, &comps, x1, x2).unwrap();
        let n_in: f64 = comps.iter().map(|c| c.norm_sqr()).sum();
        let n_out: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((n_in - n_out).abs() < 1e-12);
    }

    #[test]
    fn product_reduction_closes(
        f in family(),
        (k1, q1, q1p) in rank_and_two_projections(4),
        (k2, q2, q2p) in rank_and_two_projections(4),
        x1 in point(),
        x2 in point(),
    ) {
        let sum: CNum = sphfun_reduce(f, k1, q1, q1p, k2, q2, q2p, x1, x2).unwrap().values().sum();
        let product = sphfun_named(f, k1, q1, q1p, x1, x2).unwrap() * sphfun_named(f, k2, q2, q2p, x1, x2).unwrap();
        prop_assert!((sum - product).norm() < 1e-11);
    }

    #[test]
    fn cgc_matches_exact_arithmetic((j1, m1) in rank_and_projection(10), (j2, m2) in rank_and_projection(10), pick in 0usize..32) {
        let ranks: Vec<HalfInt> = Triangle::coupled_ranks(j1, j2).collect();
        let j = ranks[pick % ranks.len()];
        let m = m1 + m2;
        prop_assume!(m.twice.abs() <= j.twice);
        let exact = cgc_exact(j1, m1, j2, m2, j, m).to_f64();
        prop_assert!((cgc(j1, m1, j2, m2, j, m).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn cgc_columns_are_orthonormal((j1, j2) in (rank(6), rank(6)), pick in (0usize..16, 0usize..16), mpick in 0usize..16) {
        let ranks: Vec<HalfInt> = Triangle::coupled_ranks(j1, j2).collect();
        let (ja, jb) = (ranks[pick.0 % ranks.len()], ranks[pick.1 % ranks.len()]);
        let small = if ja.twice <= jb.twice { ja } else { jb };
        let m = small.projections().nth(mpick % small.multiplicity()).unwrap();
        let mut dot = 0.0;
        for m1 in j1.projections() {
            let m2 = m - m1;
            if m2.twice.abs() <= j2.twice {
                dot += cgc(j1, m1, j2, m2, ja, m).unwrap() * cgc(j1, m1, j2, m2, jb, m).unwrap();
            }
        }
        let expected = if ja == jb { 1.0 } else { 0.0 };
        prop_assert!((dot - expected).abs() < 1e-12);
    }

    #[test]
    fn rotated_coefficient_products_close(x1 in point(), x2 in point(), seed in 0u64..1000) {
        // A deterministic choice of indices from the seed keeps shrinking simple.
        let pick = |n: usize, salt: u64| ((seed.wrapping_mul(6364136223846793005).wrapping_add(salt)) >> 33) as usize % n;
        let make = |salt: u64| {
            let l1 = HalfInt::from_twice(pick(4, salt) as i32);
            let l2 = HalfInt::from_twice(pick(4, salt + 1) as i32);
            let ranks: Vec<HalfInt> = Triangle::coupled_ranks(l1, l2).collect();
            let l = ranks[pick(ranks.len(), salt + 2)];
            let proj = |k: HalfInt, s: u64| k.projections().nth(pick(k.multiplicity(), s)).unwrap();
            RcgcIndices { l1, l2, l, m1: proj(l1, salt + 3), m2: proj(l2, salt + 4), m: proj(l, salt + 5) }
        };
        let (a, b) = (make(11), make(29));
        let sum: CNum = rcgc1_product_reduce(&a, &b, x1, x2).unwrap().values().sum();
        let product = a.eval(x1, x2).unwrap() * b.eval(x1, x2).unwrap();
        prop_assert!((sum - product).norm() < 1e-11);
    }
}
