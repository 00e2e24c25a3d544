//! Reference values for each public operation.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rcgc_kit::geometry::{
    euler_from_points, mat_vec, optimal_psi, partial_solutions, rotation_matrix_zxz, x_function,
    BranchLabel, Sign,
};
use rcgc_kit::halfint_algebra::{beta, cgc, factorial_ln, gauss_2f1};
use rcgc_kit::integrals::{i_s_antiderivative, p_i, pinchon_check, s_integral, PIKernel};
use rcgc_kit::oracle::{
    cgc_exact, integrate_sphere, integrate_sphere2, p_i_quadrature, quad_1d, QuadratureSpec,
};
use rcgc_kit::rcgc::{coulomb_2e_angular, rcgc1, rcgc2, reduced_matrix_element, RadialWeight};
use rcgc_kit::sphfun::{
    sphfun_general, sphfun_named, sphfun_reduce, transform_tensor, Family, SphFunSpec,
};
use rcgc_kit::wigner::{
    a_coeff, b_coeff, c_harmonic, c_harmonic_vector, wigner_d, wigner_d_hyp, y_harmonic,
    EulerAngles,
};
use rcgc_kit::{CNum, HalfInt, SpherePoint};

fn h(s: &str) -> HalfInt {
    s.parse().unwrap()
}

fn pt(theta: f64, phi: f64) -> SpherePoint {
    SpherePoint::new(theta, phi).unwrap()
}

fn close(a: CNum, b: CNum, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn first_example() -> CNum {
    CNum::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0)
}

fn second_example() -> CNum {
    CNum::from_polar(0.25, 5.0 * PI / 8.0)
}

fn example_points() -> (SpherePoint, SpherePoint) {
    (pt(PI / 6.0, PI / 4.0), pt(PI / 3.0, PI))
}

#[test]
fn log_factorial() {
    assert_eq!(factorial_ln(h("0")).unwrap(), 0.0);
    assert!((factorial_ln(h("5")).unwrap() - 4.787_491_742_782_046).abs() < 1e-14);
    let big = factorial_ln(h("170")).unwrap();
    let by_sum: f64 = (2..=170).map(|n| f64::from(n).ln()).sum();
    assert!((big - by_sum).abs() < 1e-10);
}

#[test]
fn beta_function() {
    assert!((beta(2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
    assert!((beta(1.5, 2.5).unwrap() - PI / 16.0).abs() < 1e-14);
}

#[test]
fn hypergeometric_function() {
    assert_eq!(gauss_2f1(0.4, 1.3, 2.2, 0.0).unwrap(), 1.0);
    assert!((gauss_2f1(1.0, 1.0, 2.0, -1.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-14);
    // 1 + (-2)(3)/1 (-1) + (-2)(-1)(3)(4)/(1*2*2) (-1)^2 = 1 + 6 + 6.
    assert!((gauss_2f1(-2.0, 3.0, 1.0, -1.0).unwrap() - 13.0).abs() < 1e-13);
}

#[test]
fn clebsch_gordan_values() {
    for (j, m) in [("2", "-1"), ("5/2", "3/2")] {
        assert!((cgc(h(j), h(m), h("0"), h("0"), h(j), h(m)).unwrap() - 1.0).abs() < 1e-15);
    }
    assert!(
        (cgc(h("1"), h("0"), h("1"), h("0"), h("2"), h("0")).unwrap() - (2f64 / 3.0).sqrt()).abs()
            < 1e-15
    );
    assert!(
        (cgc(h("1"), h("1"), h("1"), h("-1"), h("0"), h("0")).unwrap() - 1.0 / 3f64.sqrt()).abs()
            < 1e-15
    );
    let half = cgc_exact(h("1/2"), h("1/2"), h("1/2"), h("-1/2"), h("0"), h("0"));
    assert!((half.to_f64() - 1.0 / SQRT_2).abs() < 1e-15);
    for twice in 0..8 {
        let j = HalfInt::from_twice(twice);
        let c = cgc_exact(j, j, j, -j, HalfInt::ZERO, HalfInt::ZERO).to_f64();
        assert!((c.abs() - 1.0 / f64::from(twice + 1).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn d_prefactors() {
    assert_eq!(
        a_coeff(h("0"), h("0"), h("0")).unwrap(),
        CNum::new(1.0, 0.0)
    );
    assert!(close(
        a_coeff(h("1"), h("1"), h("0")).unwrap(),
        CNum::new(0.0, -SQRT_2),
        1e-15
    ));
    assert!(close(
        a_coeff(h("5/2"), h("-1/2"), h("3/2")).unwrap(),
        CNum::new(-288f64.sqrt(), 0.0),
        1e-12
    ));
    assert_eq!(b_coeff(h("0"), h("0"), h("0"), 0), 1.0);
    assert_eq!(b_coeff(h("1"), h("0"), h("0"), 0), 1.0);
    assert_eq!(b_coeff(h("1"), h("0"), h("0"), 1), -1.0);
    assert_eq!(b_coeff(h("1"), h("0"), h("0"), 2), 0.0);
}

#[test]
fn d_function_values() {
    let (k, q, qp) = (h("5/2"), h("-1/2"), h("3/2"));
    let omegas = [
        (
            EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI),
            first_example(),
        ),
        (
            EulerAngles::new(1.5 * PI, PI / 2.0, PI / 4.0),
            second_example(),
        ),
    ];
    for (omega, expected) in omegas {
        assert!(close(wigner_d(k, q, qp, omega).unwrap(), expected, 1e-12));
        assert!(close(
            wigner_d_hyp(k, q, qp, omega).unwrap(),
            expected,
            1e-12
        ));
    }
    for twice in 0..=8 {
        let k = HalfInt::from_twice(twice);
        for q in k.projections() {
            for qp in k.projections() {
                let v = wigner_d(k, q, qp, EulerAngles::new(0.0, 0.0, 0.0)).unwrap();
                assert!(close(
                    v,
                    CNum::new(if q == qp { 1.0 } else { 0.0 }, 0.0),
                    1e-15
                ));
            }
        }
    }
    let p3 = wigner_d_hyp(
        h("3"),
        h("0"),
        h("0"),
        EulerAngles::new(0.0, FRAC_PI_2, 0.0),
    )
    .unwrap();
    assert!(p3.norm() < 1e-12);
    for theta in [0.3, 1.7, 3.0] {
        let v = wigner_d_hyp(
            h("1/2"),
            h("1/2"),
            h("1/2"),
            EulerAngles::new(0.0, theta, 0.0),
        )
        .unwrap();
        assert!(close(v, CNum::new((theta / 2.0).cos(), 0.0), 1e-14));
    }
}

#[test]
fn euler_angles_of_the_example_pair() {
    let (x1, x2) = example_points();
    let sols = euler_from_points(x1, x2).unwrap();
    let find = |label| {
        sols.iter()
            .find(|s| s.branch.label == label)
            .expect("branch applies")
            .omega
    };
    let o11m = find(BranchLabel::O11m);
    let o2p = find(BranchLabel::O2p);
    let expect = |o: EulerAngles, e: [f64; 3]| {
        assert!(
            (o.phi - e[0]).abs() < 1e-12
                && (o.theta - e[1]).abs() < 1e-12
                && (o.psi - e[2]).abs() < 1e-12,
            "{o:?}"
        );
    };
    expect(o11m, [1.5 * PI, PI / 6.0, 1.25 * PI]);
    expect(o2p, [1.5 * PI, PI / 2.0, PI / 4.0]);

    let x = pt(FRAC_PI_2, 0.0);
    let same = euler_from_points(x, x).unwrap();
    let o = same
        .iter()
        .find(|s| s.branch.label == BranchLabel::O11p)
        .expect("O11p applies")
        .omega;
    expect(o, [FRAC_PI_2, 0.0, 1.5 * PI]);
}

#[test]
fn rotation_matrix_values() {
    let identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for omega in [
        EulerAngles::new(0.0, 0.0, 0.0),
        EulerAngles::new(FRAC_PI_2, 0.0, 1.5 * PI),
    ] {
        let r = rotation_matrix_zxz(omega);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - identity[i][j]).abs() < 1e-15);
            }
        }
    }
    let (x1, x2) = example_points();
    let v = mat_vec(
        &rotation_matrix_zxz(EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI)),
        x1.unit_vector(),
    );
    let t = x2.unit_vector();
    assert!((0..3).all(|i| (v[i] - t[i]).abs() < 1e-15));
}

#[test]
fn gauge_angles() {
    let p = optimal_psi(pt(1.0, 0.0));
    assert!(!p.any);
    assert!((p.values[0] - FRAC_PI_2).abs() < 1e-15 && (p.values[1] - 1.5 * PI).abs() < 1e-15);
    let p = optimal_psi(pt(1.0, PI / 4.0));
    assert!((p.values[0] - PI / 4.0).abs() < 1e-15 && (p.values[1] - 1.25 * PI).abs() < 1e-15);
    assert!(optimal_psi(pt(0.0, 2.0)).any);
}

#[test]
fn partial_solutions_of_the_example() {
    let (x1, x2) = example_points();
    let s = partial_solutions(x1, x2, 1.25 * PI);
    assert!(s
        .theta
        .iter()
        .any(|c| c.value.is_some_and(|v| (v - PI / 6.0).abs() < 1e-10)));
    assert!(s
        .verified
        .iter()
        .any(|&(t, p)| (t - PI / 6.0).abs() < 1e-10 && (p - 1.5 * PI).abs() < 1e-10));

    let x = pt(1.1, 0.0);
    let psi = optimal_psi(x).values[0];
    let s = partial_solutions(x, x, psi);
    assert!(s
        .theta
        .iter()
        .any(|c| c.value.is_some_and(|v| v.abs() < 1e-10)));
}

#[test]
fn x_function_values() {
    let (x1, x2) = example_points();
    let target = (PI / 12.0).sin().powi(2);
    let values: Vec<f64> = [Sign::Plus, Sign::Minus]
        .iter()
        .filter_map(|&s| x_function(x1, x2, 1.25 * PI, s))
        .collect();
    assert!(
        values.iter().any(|v| (v - target).abs() < 1e-12),
        "{values:?}"
    );
}

#[test]
fn sphere_function_values() {
    let (x1, x2) = example_points();
    let (k, q, qp) = (h("5/2"), h("-1/2"), h("3/2"));
    assert!(close(
        sphfun_named(Family::XiM, k, q, qp, x1, x2).unwrap(),
        first_example(),
        1e-12
    ));
    assert!(close(
        sphfun_named(Family::ZetaP, k, q, qp, x1, x2).unwrap(),
        second_example(),
        1e-12
    ));
    let zeta = SphFunSpec::new(Family::ZetaP.tuple(x2), k, q, qp).unwrap();
    assert!(close(
        sphfun_general(&zeta, x1, x2).unwrap(),
        second_example(),
        1e-12
    ));
    for family in Family::ALL {
        let one = sphfun_named(family, h("0"), h("0"), h("0"), pt(0.4, 1.0), pt(2.0, 5.0)).unwrap();
        assert!(close(one, CNum::new(1.0, 0.0), 1e-15));
    }
}

#[test]
fn product_reduction_values() {
    let (x1, x2) = (pt(0.8, 2.9), pt(2.3, 0.4));
    let scalar = sphfun_reduce(
        Family::XiP,
        h("0"),
        h("0"),
        h("0"),
        h("0"),
        h("0"),
        h("0"),
        x1,
        x2,
    )
    .unwrap();
    assert_eq!(scalar.len(), 1);
    assert!(close(scalar[&h("0")], CNum::new(1.0, 0.0), 1e-15));
    for (k1, q1, q1p, k2, q2, q2p, tol) in [
        ("1/2", "1/2", "-1/2", "1/2", "1/2", "1/2", 1e-12),
        ("1", "-1", "0", "2", "2", "1", 1e-11),
    ] {
        let (k1, q1, q1p, k2, q2, q2p) = (h(k1), h(q1), h(q1p), h(k2), h(q2), h(q2p));
        let terms = sphfun_reduce(Family::ThetaM, k1, q1, q1p, k2, q2, q2p, x1, x2).unwrap();
        let product = sphfun_named(Family::ThetaM, k1, q1, q1p, x1, x2).unwrap()
            * sphfun_named(Family::ThetaM, k2, q2, q2p, x1, x2).unwrap();
        assert!(close(terms.values().sum(), product, tol));
    }
}

#[test]
fn tensor_transform_values() {
    let (x1, x2) = (pt(1.0, 0.5), pt(2.1, 3.3));
    let k = h("1");
    let c1 = c_harmonic_vector(k, x1).unwrap();
    let out = transform_tensor(Family::Eta, k, &c1, x1, x2).unwrap();
    let n1: f64 = c1.iter().map(|c| c.norm_sqr()).sum();
    let n2: f64 = out.iter().map(|c| c.norm_sqr()).sum();
    assert!((n1 - n2).abs() < 1e-12);
    let wrong = transform_tensor(Family::Eta, k, &c1[..2], x1, x2);
    assert!(wrong.is_err());
}

#[test]
fn boundary_kernel_values() {
    let kernel = PIKernel {
        k: h("1"),
        q: h("0"),
        qp: h("0"),
        p: 0,
        theta1: 0.0,
        a: 0.0,
        b: PI,
        gamma: Sign::Plus,
    };
    assert!((p_i(&kernel).unwrap() - 1.0).abs() < 1e-12);
    let partial = PIKernel {
        k: h("2"),
        p: 1,
        theta1: PI / 3.0,
        b: PI / 3.0,
        ..kernel
    };
    assert!((p_i(&partial).unwrap() - p_i_quadrature(&partial).unwrap()).abs() < 1e-10);

    assert_eq!(
        i_s_antiderivative(0, 0, h("1"), h("0"), h("0"), 0.0).unwrap(),
        0.0
    );
    assert!(
        (i_s_antiderivative(1, 0, h("1"), h("0"), h("0"), f64::NEG_INFINITY).unwrap() - 0.25).abs()
            < 1e-12
    );
    assert!((pinchon_check(h("0"), 0).unwrap() - 2.0).abs() < 1e-14);
    assert_eq!(pinchon_check(h("3"), 1).unwrap(), 0.0);
    let quad = quad_1d(|t| t.sin().powi(3) * t.cos().powi(2), 0.0, PI, 1e-14).unwrap();
    assert!((pinchon_check(h("1"), 2).unwrap() - quad).abs() < 1e-12);
    assert!((quad - 4.0 / 15.0).abs() < 1e-12);
}

#[test]
fn sphere_integral_of_rank_zero_is_four_pi() {
    for x1 in [pt(1.0, 2.0), pt(0.0, 0.0), pt(PI, 5.0)] {
        assert!(close(
            s_integral(h("0"), h("0"), h("0"), x1).unwrap(),
            CNum::new(4.0 * PI, 0.0),
            1e-12
        ));
    }
}

/// The integer-rank selection rule asserts that only `q = 0` survives the
/// integration. The piecewise branches break the pure `exp(i q phi2)`
/// dependence, and both the closed form and quadrature give nonzero values.
#[test]
fn sphere_integral_vanishes_for_nonzero_q_at_integer_rank() {
    let x1 = pt(1.0, 0.7);
    for qp in h("2").projections() {
        let v = s_integral(h("2"), h("1"), qp, x1).unwrap();
        assert!(v.norm() < 1e-12, "q' = {qp}: {v}");
    }
}

#[test]
fn rotated_coefficient_values() {
    let (x1, x2) = (pt(0.9, 1.4), pt(2.5, 4.1));
    for l1 in ["1/2", "1", "2"] {
        let l1 = h(l1);
        for m1 in l1.projections() {
            for l in [l1, l1 + h("1")] {
                for m in l.projections() {
                    let v = rcgc1(l1, h("0"), l, m1, h("0"), m, x1, x2).unwrap();
                    let expected = if l == l1 && m == m1 { 1.0 } else { 0.0 };
                    assert!(close(v, CNum::new(expected, 0.0), 1e-14));
                }
            }
        }
    }
    // With l2 = 0 both coupled ranks equal l1.
    let v = rcgc2(h("1"), h("0"), h("1"), h("1"), h("0"), h("0"), x1, x2).unwrap();
    assert!(close(v, CNum::new(1.0, 0.0), 1e-14));
    let v = rcgc2(h("1"), h("0"), h("1"), h("1"), h("1"), h("0"), x1, x2).unwrap();
    assert!(v.norm() < 1e-14);
}

#[test]
fn reduced_element_values() {
    let north = pt(0.0, 0.0);
    for l in 0..=4 {
        let l = HalfInt::int(l);
        let c0 = c_harmonic_vector(h("0"), north).unwrap();
        assert!(close(
            reduced_matrix_element(l, h("0"), l, &c0).unwrap(),
            CNum::new(1.0, 0.0),
            1e-14
        ));
    }
    for (l, k, lb) in [(2, 2, 2), (1, 1, 0), (3, 2, 1), (2, 4, 2)] {
        let (l, k, lb) = (HalfInt::int(l), HalfInt::int(k), HalfInt::int(lb));
        let t0 = c_harmonic_vector(k, north).unwrap();
        assert!(close(
            t0[k.index_of(HalfInt::ZERO)],
            rcgc_kit::halfint_algebra::i_pow(k),
            1e-15
        ));
        let closed = reduced_matrix_element(l, k, lb, &t0).unwrap();
        let lv = l.value();
        let expected = rcgc_kit::halfint_algebra::i_pow(lb + k - l)
            * ((2.0 * lb.value() + 1.0) / (2.0 * lv + 1.0)).sqrt()
            * cgc(lb, HalfInt::ZERO, k, HalfInt::ZERO, l, HalfInt::ZERO).unwrap();
        assert!(
            close(closed, expected, 1e-13),
            "{l} {k} {lb}: {closed} vs {expected}"
        );
    }
}

#[test]
fn coulomb_rank_zero_values() {
    let spec = QuadratureSpec::with_nodes(12, 12);
    let (g, gp) = (RadialWeight::ones(h("0")), RadialWeight::ones(h("0")));
    let closed = coulomb_2e_angular(h("0"), h("0"), h("0"), h("0"), &g, &gp, 0).unwrap();
    let quad = integrate_sphere2(|_, _| CNum::new(1.0, 0.0), &spec).unwrap();
    assert!(close(closed, quad, 1e-8), "{closed} vs {quad}");
    assert!(coulomb_2e_angular(h("1"), h("0"), h("1"), h("0"), &g, &gp, -1).is_err());
}

#[test]
fn sphere_quadrature_values() {
    let spec = QuadratureSpec::default();
    assert!(close(
        integrate_sphere(|_| CNum::new(1.0, 0.0), &spec).unwrap(),
        CNum::new(4.0 * PI, 0.0),
        1e-12
    ));
    let y10 = integrate_sphere(
        |x| y_harmonic(h("1"), h("0"), x).unwrap().norm_sqr().into(),
        &spec,
    )
    .unwrap();
    assert!(close(y10, CNum::new(1.0, 0.0), 1e-12));
    let pair = integrate_sphere2(
        |x, _| y_harmonic(h("1"), h("0"), x).unwrap().norm_sqr().into(),
        &spec,
    )
    .unwrap();
    assert!(close(pair, CNum::new(4.0 * PI, 0.0), 1e-10));
    let c00 = c_harmonic(h("0"), h("0"), pt(0.3, 0.2)).unwrap();
    assert!(close(c00, CNum::new(1.0, 0.0), 1e-15));
}
