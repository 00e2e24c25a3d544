//! Independent reference computations used by the tests, the examples and `verify`.
//!
//! Nothing here shares code paths with the closed forms it checks beyond the
//! basic `D` evaluation: integrals are done by brute-force quadrature, the
//! Clebsch-Gordan reference uses plain big-integer factorials, and Euler angles
//! are recovered from explicit rotation matrices.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::{Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Sign, SpherePoint};
use crate::halfint_algebra::{CNum, HalfInt};
use crate::integrals::PIKernel;
use crate::rcgc::RadialWeight;
use crate::sphfun::{eta, sphfun_general, Family, SphFunSpec};
use crate::wigner::{c_harmonic, y_harmonic, EulerAngles};

/// Node counts and the refinement contract of the sphere quadratures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes in `theta` (per sub-interval).
    pub nodes_theta: usize,
    /// Nodes in `phi` (trapezoid over a full period, Gauss-Legendre on sub-intervals).
    pub nodes_phi: usize,
    /// Successive estimates must differ by less than this.
    pub refine_tol: f64,
    /// How many times the node counts may be doubled.
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_theta: 24,
            nodes_phi: 24,
            refine_tol: 1e-10,
            max_refinements: 4,
        }
    }
}

impl QuadratureSpec {
    /// A spec with the given node counts and the default tolerance.
    pub fn with_nodes(nodes_theta: usize, nodes_phi: usize) -> Self {
        QuadratureSpec {
            nodes_theta,
            nodes_phi,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nodes_theta < 8 || self.nodes_phi < 8 {
            return Err(Error::domain("quadrature node counts must be at least 8"));
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err(Error::domain("refine_tol must be positive"));
        }
        Ok(())
    }

    fn doubled(&self, times: usize) -> (usize, usize) {
        (self.nodes_theta << times, self.nodes_phi << times)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    type RuleCache = Mutex<HashMap<usize, Vec<(f64, f64)>>>;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().map(|c| c.get(&n).cloned()).ok().flatten() {
        return rule;
    }
    let order = NonZeroUsize::new(n.max(2)).expect("order is at least 2");
    let rule: Vec<(f64, f64)> = GaussLegendre::new(order).as_node_weight_pairs().to_vec();
    if let Ok(mut c) = cache.lock() {
        c.insert(n, rule.clone());
    }
    rule
}

/// Gauss-Legendre nodes and weights mapped to `[a, b]`.
pub fn legendre_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
    legendre_rule(n)
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

fn sphere_once<F>(f: &F, nt: usize, np: usize) -> CNum
where
    F: Fn(SpherePoint) -> CNum + Sync,
{
    let thetas = legendre_on(0.0, PI, nt);
    let dphi = 2.0 * PI / np as f64;
    let rows: Vec<CNum> = thetas
        .par_iter()
        .map(|&(t, w)| {
            let mut row = CNum::new(0.0, 0.0);
            for j in 0..np {
                row += f(SpherePoint {
                    theta: t,
                    phi: j as f64 * dphi,
                });
            }
            row * (w * t.sin() * dphi)
        })
        .collect();
    rows.into_iter().sum()
}

fn refine<G>(spec: &QuadratureSpec, what: &str, eval: G) -> Result<CNum>
where
    G: Fn(usize, usize) -> CNum,
{
    spec.validate()?;
    let (nt, np) = spec.doubled(0);
    let mut last = eval(nt, np);
    for r in 1..=spec.max_refinements {
        let (nt, np) = spec.doubled(r);
        let next = eval(nt, np);
        if (next - last).norm() < spec.refine_tol {
            return Ok(next);
        }
        last = next;
        if r == spec.max_refinements {
            return Err(Error::numeric(
                format!("{what} did not converge to {}", spec.refine_tol),
                vec![last.re, last.im, next.re, next.im],
            ));
        }
    }
    Ok(last)
}

/// `int_{S^2} f(x) dx` with `dx = sin(theta) dtheta dphi`.
///
/// Gauss-Legendre in `theta` (weighted by `sin theta`) and the periodic trapezoid
/// rule in `phi`. Node counts are doubled until two successive estimates agree
/// to `refine_tol`.
pub fn integrate_sphere<F>(f: F, spec: &QuadratureSpec) -> Result<CNum>
where
    F: Fn(SpherePoint) -> CNum + Sync,
{
    refine(spec, "sphere quadrature", |nt, np| sphere_once(&f, nt, np))
}

/// `int f` over the rectangle `[ta, tb] x [pa, pb]` of the sphere, Gauss-Legendre in both angles.
pub fn integrate_patch<F>(f: &F, theta: (f64, f64), phi: (f64, f64), nt: usize, np: usize) -> CNum
where
    F: Fn(SpherePoint) -> CNum + Sync,
{
    if theta.1 <= theta.0 || phi.1 <= phi.0 {
        return CNum::new(0.0, 0.0);
    }
    let ts = legendre_on(theta.0, theta.1, nt);
    let ps = legendre_on(phi.0, phi.1, np);
    let rows: Vec<CNum> = ts
        .par_iter()
        .map(|&(t, wt)| {
            let mut row = CNum::new(0.0, 0.0);
            for &(p, wp) in &ps {
                row += f(SpherePoint { theta: t, phi: p }) * wp;
            }
            row * (wt * t.sin())
        })
        .collect();
    rows.into_iter().sum()
}

/// `int_{S^2 x S^2} f(x1, x2) dx1 dx2` with the tensor rule of [`integrate_sphere`].
pub fn integrate_sphere2<F>(f: F, spec: &QuadratureSpec) -> Result<CNum>
where
    F: Fn(SpherePoint, SpherePoint) -> CNum + Sync,
{
    refine(spec, "double sphere quadrature", |nt, np| {
        sphere2_once(&f, nt, np)
    })
}

fn sphere2_once<F>(f: &F, nt: usize, np: usize) -> CNum
where
    F: Fn(SpherePoint, SpherePoint) -> CNum + Sync,
{
    let thetas = legendre_on(0.0, PI, nt);
    let dphi = 2.0 * PI / np as f64;
    let points: Vec<(SpherePoint, f64)> = thetas
        .iter()
        .flat_map(|&(t, w)| {
            (0..np).map(move |j| {
                (
                    SpherePoint {
                        theta: t,
                        phi: j as f64 * dphi,
                    },
                    w * t.sin() * dphi,
                )
            })
        })
        .collect();
    let rows: Vec<CNum> = points
        .par_iter()
        .map(|&(x1, w1)| {
            let mut acc = CNum::new(0.0, 0.0);
            for &(x2, w2) in &points {
                acc += f(x1, x2) * w2;
            }
            acc * w1
        })
        .collect();
    rows.into_iter().sum()
}

/// Adaptive Gauss-Legendre integration of a real function on `[a, b]`.
///
/// Each interval is accepted when its 15-point estimate agrees with the sum of
/// the two half-interval estimates to `tol` (scaled by the interval share).
pub fn quad_1d<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        legendre_on(a, b, 15).iter().map(|&(x, w)| w * f(x)).sum()
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (left, right) = (rule(f, a, m), rule(f, m, b));
        let err = (left + right - whole).abs();
        if err <= tol || err <= 1e-15 * (left + right).abs() {
            return Ok(left + right);
        }
        if depth == 0 {
            return Err(Error::numeric(
                "adaptive quadrature hit its depth limit",
                vec![whole, left + right],
            ));
        }
        Ok(recurse(f, a, m, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, right, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    let whole = rule(&f, a, b);
    recurse(&f, a, b, whole, tol, 40)
}

/// `pI` by direct quadrature of its defining integral.
pub fn p_i_quadrature(kernel: &PIKernel) -> Result<f64> {
    let k2 = i64::from(kernel.k.twice);
    let m = kernel.m();
    let g = kernel.gamma.f();
    let theta1 = kernel.theta1;
    quad_1d(
        |t| {
            let u = 0.5 * (theta1 - g * t);
            t.sin() * u.cos().powi((k2 - m) as i32) * u.sin().powi(m as i32)
        },
        kernel.a,
        kernel.b,
        1e-14,
    )
}

/// `D^k_{qq'}` evaluated as the `xi_p` tuple with explicit `n'` and no `Phi` winding.
fn xi_with_winding(
    minus: bool,
    n_prime: i32,
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> CNum {
    let mut branch = Family::XiP.tuple(x2);
    if minus {
        branch.beta = Sign::Minus;
    }
    branch.n_prime = n_prime;
    let spec = SphFunSpec { branch, k, q, qp };
    sphfun_general(&spec, x1, x2).unwrap_or(CNum::new(f64::NAN, f64::NAN))
}

/// The `n'` that each of the four integration areas uses for a given `phi1`.
///
/// The `Omega_11` areas take the winding that brings `-phi1 - pi/2` into
/// `[0, 2 pi)` (1 or 2); the `Omega_12` areas take the winding of
/// `-phi1 + pi/2` (0 or 1).
pub fn area_windings(phi1: f64) -> (i32, i32) {
    (
        wrap_angle(-phi1 - 0.5 * PI).1,
        wrap_angle(-phi1 + 0.5 * PI).1,
    )
}

/// Brute-force `S^k_{qq'}(x1; +)` assembled from the four areas
///
/// | area | `phi2` | `theta2` | function |
/// |---|---|---|---|
/// | `11+` | `[0, pi]` | `[0, theta1]` | `+xi` |
/// | `11-` | `[0, pi]` | `[theta1, pi]` | `-xi` |
/// | `12+` | `[pi, 2pi]` | `[0, theta1]` | `-xi` |
/// | `12-` | `[pi, 2pi]` | `[theta1, pi]` | `+xi` |
///
/// with the `n'` of [`area_windings`]. Each area is integrated separately so
/// that no seam falls inside a quadrature cell.
pub fn s_integral_oracle(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    spec: &QuadratureSpec,
) -> Result<CNum> {
    crate::halfint_algebra::check_projection(k, q)?;
    crate::halfint_algebra::check_projection(k, qp)?;
    let (n11, n12) = area_windings(x1.phi);
    let t1 = x1.theta;
    let areas = [
        ((0.0, t1), (0.0, PI), false, n11),
        ((t1, PI), (0.0, PI), true, n11),
        ((0.0, t1), (PI, 2.0 * PI), true, n12),
        ((t1, PI), (PI, 2.0 * PI), false, n12),
    ];
    refine(spec, "piecewise S quadrature", |nt, np| {
        areas
            .iter()
            .map(|&(th, ph, minus, n)| {
                integrate_patch(
                    &|x2| xi_with_winding(minus, n, k, q, qp, x1, x2),
                    th,
                    ph,
                    nt,
                    np,
                )
            })
            .sum()
    })
}

/// `int_{S^2} eta^k_{qq'}(x1, x2) dx2` by quadrature.
pub fn eta_integral_oracle(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    spec: &QuadratureSpec,
) -> Result<CNum> {
    refine(spec, "eta sphere quadrature", |nt, np| {
        [(0.0, PI), (PI, 2.0 * PI)]
            .iter()
            .map(|&ph| {
                integrate_patch(
                    &|x2| eta(k, q, qp, x1, x2).unwrap_or_default(),
                    (0.0, PI),
                    ph,
                    nt,
                    np,
                )
            })
            .sum()
    })
}

/// `int conj(Y^l_m) C^k_q Y^lb_mb dx` by quadrature.
pub fn gaunt_oracle(
    l: HalfInt,
    m: HalfInt,
    k: HalfInt,
    q: HalfInt,
    lb: HalfInt,
    mb: HalfInt,
    spec: &QuadratureSpec,
) -> Result<CNum> {
    integrate_sphere(
        |x| {
            let a = y_harmonic(l, m, x).unwrap_or_default();
            let c = c_harmonic(k, q, x).unwrap_or_default();
            let b = y_harmonic(lb, mb, x).unwrap_or_default();
            a.conj() * c * b
        },
        spec,
    )
}

/// `[l||C^k||lb]` from one Gaunt quadrature divided by its Wigner-Eckart coefficient.
///
/// With `<l m|T^k_q|lb mb> = (-1)^{2k} [l||T^k||lb] <lb mb k q|l m>`, the
/// projections with the largest coupling coefficient are used. When every
/// coefficient vanishes the reduced element is reported as zero.
pub fn reduced_element_oracle(
    l: HalfInt,
    k: HalfInt,
    lb: HalfInt,
    spec: &QuadratureSpec,
) -> Result<CNum> {
    let mut best: Option<(HalfInt, HalfInt, HalfInt, f64)> = None;
    for m in l.projections() {
        for q in k.projections() {
            let mb = m - q;
            if mb.twice.abs() > lb.twice {
                continue;
            }
            let c = cgc_exact(lb, mb, k, q, l, m).to_f64();
            if best.is_none_or(|b| c.abs() > b.3.abs()) {
                best = Some((m, q, mb, c));
            }
        }
    }
    match best {
        Some((m, q, mb, c)) if c.abs() > 1e-8 => {
            let sign = if k.twice % 2 == 0 { 1.0 } else { -1.0 };
            Ok(gaunt_oracle(l, m, k, q, lb, mb, spec)? / (sign * c))
        }
        _ => Ok(CNum::new(0.0, 0.0)),
    }
}

/// Legendre polynomial `P_n(x)` by the three-term recurrence.
pub fn legendre_p(n: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for j in 1..n {
        let j = f64::from(j);
        let p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Four-dimensional quadrature of the two-electron Coulomb angular element
///
/// ```text
/// int dx1 dx2 conj(Psi^l_m) sum_{k <= k_max} (r<^k / r>^{k+1}) P_k(cos w12) Psi^{l'}_{m'},
/// Psi^l_m(x1, x2) = sum_mu g_mu eta^l_{m mu}(x1, x2)
/// ```
#[allow(clippy::too_many_arguments)]
pub fn coulomb_oracle(
    l: HalfInt,
    m: HalfInt,
    lp: HalfInt,
    mp: HalfInt,
    g_bra: &RadialWeight,
    g_ket: &RadialWeight,
    k_max: u32,
    spec: &QuadratureSpec,
) -> Result<CNum> {
    let rho: Vec<f64> = (0..=k_max).map(|k| g_bra.rho(k)).collect();
    let integrand = |x1: SpherePoint, x2: SpherePoint| {
        let v1 = x1.unit_vector();
        let v2 = x2.unit_vector();
        let cw = (v1[0] * v2[0] + v1[1] * v2[1] + v1[2] * v2[2]).clamp(-1.0, 1.0);
        let v: f64 = rho
            .iter()
            .enumerate()
            .map(|(k, r)| r * legendre_p(k as u32, cw))
            .sum();
        let bra: CNum = l
            .projections()
            .map(|mu| (g_bra.get(mu) * eta(l, m, mu, x1, x2).unwrap_or_default()).conj())
            .sum();
        let ket: CNum = lp
            .projections()
            .map(|mu| g_ket.get(mu) * eta(lp, mp, mu, x1, x2).unwrap_or_default())
            .sum();
        bra * v * ket
    };
    integrate_sphere2(integrand, spec)
}

/// A Clebsch-Gordan coefficient as `sign * sqrt(squared)` with `squared` rational.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCgc {
    /// `-1`, `0` or `1`.
    pub sign: i8,
    /// The exact square of the coefficient.
    pub squared: BigRational,
}

impl ExactCgc {
    /// The coefficient rounded to `f64`.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.squared.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

fn big_factorial(n: i64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Racah's closed form in exact big-integer arithmetic.
///
/// Incompatible or non-coupling arguments give the zero coefficient.
pub fn cgc_exact(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> ExactCgc {
    let zero = ExactCgc {
        sign: 0,
        squared: BigRational::zero(),
    };
    let all = [(j1, m1), (j2, m2), (j, m)];
    if all
        .iter()
        .any(|&(a, b)| a.twice < 0 || b.twice.abs() > a.twice || (a.twice - b.twice) % 2 != 0)
    {
        return zero;
    }
    let (a, b, c) = (j1.twice, j2.twice, j.twice);
    if m1.twice + m2.twice != m.twice || (a - b).abs() > c || c > a + b || (a + b + c) % 2 != 0 {
        return zero;
    }
    let h = |x: i32| i64::from(x) / 2;
    let f = |x: i32| big_factorial(h(x));
    let mut pre = BigRational::new(
        BigInt::from(c + 1) * f(a + b - c) * f(a - b + c) * f(-a + b + c),
        f(a + b + c + 2),
    );
    for x in [
        a + m1.twice,
        a - m1.twice,
        b + m2.twice,
        b - m2.twice,
        c + m.twice,
        c - m.twice,
    ] {
        pre *= BigRational::from_integer(f(x));
    }
    let mut sum = BigRational::zero();
    for t in 0..=h(a + b - c) {
        let args = [
            t,
            h(a + b - c) - t,
            h(a - m1.twice) - t,
            h(b + m2.twice) - t,
            h(c - b + m1.twice) + t,
            h(c - a - m2.twice) + t,
        ];
        if args.iter().any(|&x| x < 0) {
            continue;
        }
        let den = args
            .iter()
            .fold(BigInt::one(), |acc, &x| acc * big_factorial(x));
        let term = BigRational::new(BigInt::one(), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    ExactCgc {
        sign,
        squared: pre * &sum * &sum,
    }
}

/// ZXZ Euler angles `(Phi, Theta, Psi)` of a rotation matrix, `Theta` in `[0, pi]`.
///
/// When `sin(Theta)` vanishes only `Phi + Psi` (or `Phi - Psi`) is determined;
/// `Psi = 0` is chosen.
pub fn euler_from_matrix(r: &[[f64; 3]; 3]) -> EulerAngles {
    let theta = r[2][2].clamp(-1.0, 1.0).acos();
    if theta.sin().abs() < 1e-12 {
        let phi = r[1][0].atan2(r[0][0]);
        return EulerAngles::new(wrap_angle(phi).0, theta, 0.0);
    }
    let phi = r[0][2].atan2(-r[1][2]);
    let psi = r[2][0].atan2(r[2][1]);
    EulerAngles::new(wrap_angle(phi).0, theta, wrap_angle(psi).0)
}
