//! Named property suites.
//!
//! Each suite runs a family of checks against an independent reference and
//! reports the largest error it saw. The `verify` subcommand prints these
//! reports and the acceptance tests assert on them.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    euler_from_points, mat_mul, mat_vec, omega1_solution, rotation_matrix_zxz, Sign, SpherePoint,
};
use crate::halfint_algebra::{cgc, sign_pow, CNum, HalfInt, Triangle};
use crate::integrals::{p_i, pinchon_check, s_integral, PIKernel};
use crate::oracle::{
    cgc_exact, coulomb_oracle, euler_from_matrix, p_i_quadrature, quad_1d, reduced_element_oracle,
    s_integral_oracle, QuadratureSpec,
};
use crate::rcgc::{
    coulomb_2e_angular, coulomb_2e_angular_as_printed, coupled_c, matrix_element_at_point, rcgc1,
    rcgc1_product_reduce, rcgc2, reduced_matrix_element, reduced_matrix_element_by_orthogonality,
    RadialWeight, RcgcIndices,
};
use crate::sphfun::{
    eta, eta_minus, eta_plus, family_matrix, sphfun_general, sphfun_named, sphfun_reduce,
    transform_tensor, Family, SphFunSpec,
};
use crate::wigner::{
    c_harmonic, c_harmonic_vector, p_range, wigner_d, wigner_d_hyp, wigner_d_matrix, y_harmonic,
    EulerAngles,
};

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// The two worked `D` values, by Euler angles and by coordinate pairs.
    WorkedExamples,
    /// `R(Omega) r1 = r2` for every solution on a regular grid of point pairs.
    Geometry,
    /// Branch functions equal `D` at the branch's Euler angles.
    BranchAgreement,
    /// Unitarity of `D` and of the `eta` matrix.
    Unitarity,
    /// Complex conjugation and the `2 pi` shift of `Theta`.
    Conjugation,
    /// `D(Omega1) D(Omega2) = D(Omega1 Omega2)`.
    Composition,
    /// Relations between the named families.
    Relations,
    /// Product reductions of spherical functions and of rotated coefficients.
    Reduction,
    /// Closed-form sphere integrals against 2-D quadrature.
    SIntegral,
    /// Boundary kernels and the `sin^{2k+1} cos^g` Beta integral.
    Boundary,
    /// The single-`2F1` form of `D` against the finite sum.
    Hypergeometric,
    /// Reduced matrix elements against Gaunt quadrature.
    RedMat,
    /// The two-electron Coulomb angular element against 4-D quadrature.
    Coulomb,
    /// Clebsch-Gordan coefficients against exact big-integer evaluation.
    Cgc,
    /// Tensor-product closures of the rotated coefficients.
    Rcgc,
}

impl Suite {
    /// Every suite in a fixed order.
    pub const ALL: [Suite; 15] = [
        Suite::WorkedExamples,
        Suite::Geometry,
        Suite::BranchAgreement,
        Suite::Unitarity,
        Suite::Conjugation,
        Suite::Composition,
        Suite::Relations,
        Suite::Reduction,
        Suite::SIntegral,
        Suite::Boundary,
        Suite::Hypergeometric,
        Suite::RedMat,
        Suite::Coulomb,
        Suite::Cgc,
        Suite::Rcgc,
    ];

    /// Kebab-case name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Suite::WorkedExamples => "worked-examples",
            Suite::Geometry => "geometry",
            Suite::BranchAgreement => "branch-agreement",
            Suite::Unitarity => "unitarity",
            Suite::Conjugation => "conjugation",
            Suite::Composition => "composition",
            Suite::Relations => "relations",
            Suite::Reduction => "reduction",
            Suite::SIntegral => "s-integral",
            Suite::Boundary => "boundary",
            Suite::Hypergeometric => "hypergeometric",
            Suite::RedMat => "redmat",
            Suite::Coulomb => "coulomb",
            Suite::Cgc => "cgc",
            Suite::Rcgc => "rcgc",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::domain(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Knobs shared by the suites. `None` selects the suite's own default.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Number of random draws.
    pub draws: Option<usize>,
    /// Points per axis of grid-based suites.
    pub grid: Option<usize>,
    /// Seed of the random draws.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            draws: None,
            grid: None,
            seed: 20_240_611,
        }
    }
}

impl SuiteOptions {
    fn draws_or(&self, n: usize) -> usize {
        self.draws.unwrap_or(n)
    }

    fn rng(&self) -> StdRng {
        StdRng::seed_from_u64(self.seed)
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Short identifier.
    pub name: String,
    /// Largest error over all samples; infinite when an evaluation failed.
    pub max_error: f64,
    /// Bound the error must not exceed.
    pub tolerance: f64,
    /// Number of samples.
    pub samples: usize,
    /// `max_error <= tolerance`.
    pub passed: bool,
    /// Reported for comparison only; does not affect the suite verdict.
    pub informational: bool,
    /// Extra detail such as timings or a breakdown by case.
    pub note: Option<String>,
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// Which suite ran.
    pub suite: Suite,
    /// All checks, in the order they ran.
    pub checks: Vec<CheckResult>,
    /// Wall time of the whole suite.
    pub elapsed_ms: f64,
}

impl SuiteReport {
    /// True when every non-informational check passed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .all(|c| c.passed)
    }

    /// The largest error over the non-informational checks.
    pub fn max_error(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| c.max_error)
            .fold(0.0, f64::max)
    }

    /// Looks up a check by name.
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing non-informational checks.
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.informational && !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Running maximum of errors; a NaN or a failed evaluation counts as infinite.
#[derive(Clone, Copy, Debug, Default)]
struct Worst {
    max: f64,
    n: usize,
}

impl Worst {
    fn add(&mut self, e: f64) {
        self.n += 1;
        if e.is_nan() {
            self.max = f64::INFINITY;
        } else if e > self.max {
            self.max = e;
        }
    }

    fn add_result(&mut self, e: Result<f64>) {
        self.add(e.unwrap_or(f64::INFINITY));
    }

    fn merge(mut self, other: Worst) -> Worst {
        self.n += other.n;
        if other.max > self.max {
            self.max = other.max;
        }
        self
    }

    fn check(self, name: &str, tolerance: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            max_error: self.max,
            tolerance,
            samples: self.n,
            passed: self.n > 0 && self.max <= tolerance,
            informational: false,
            note: None,
        }
    }
}

trait CheckExt {
    fn note(self, note: impl Into<String>) -> Self;
    fn informational(self) -> Self;
}

impl CheckExt for CheckResult {
    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let start = Instant::now();
    let checks = match suite {
        Suite::WorkedExamples => worked_examples(),
        Suite::Geometry => geometry(opts),
        Suite::BranchAgreement => branch_agreement(opts),
        Suite::Unitarity => unitarity(opts),
        Suite::Conjugation => conjugation(opts),
        Suite::Composition => composition(opts),
        Suite::Relations => relations(opts),
        Suite::Reduction => reduction(opts),
        Suite::SIntegral => s_integral_suite(),
        Suite::Boundary => boundary(opts),
        Suite::Hypergeometric => hypergeometric(opts),
        Suite::RedMat => redmat(opts),
        Suite::Coulomb => coulomb(),
        Suite::Cgc => cgc_suite(),
        Suite::Rcgc => rcgc_suite(opts),
    };
    SuiteReport {
        suite,
        checks,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn point(theta: f64, phi: f64) -> SpherePoint {
    SpherePoint { theta, phi }
}

fn rand_point(rng: &mut StdRng) -> SpherePoint {
    point(rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))
}

fn rand_pair(rng: &mut StdRng) -> (SpherePoint, SpherePoint) {
    loop {
        let (a, b) = (rand_point(rng), rand_point(rng));
        if a.theta > 1e-9 || b.theta > 1e-9 {
            return (a, b);
        }
    }
}

fn rand_rank(rng: &mut StdRng, max_twice: i32) -> HalfInt {
    h(rng.random_range(0..=max_twice))
}

fn rand_int_rank(rng: &mut StdRng, max: i32) -> HalfInt {
    HalfInt::int(rng.random_range(0..=max))
}

fn rand_proj(rng: &mut StdRng, k: HalfInt) -> HalfInt {
    h(-k.twice + 2 * rng.random_range(0..=k.twice))
}

fn rand_omega(rng: &mut StdRng) -> EulerAngles {
    EulerAngles::new(
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..TAU),
    )
}

fn worked_examples() -> Vec<CheckResult> {
    let (k, q, qp) = (h(5), h(-1), h(3));
    let first = CNum::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0);
    let second = CNum::from_polar(0.25, 5.0 * PI / 8.0);
    let (x1, x2) = (point(PI / 6.0, PI / 4.0), point(PI / 3.0, PI));
    type Case<'a> = (&'a str, CNum, Box<dyn Fn() -> Result<CNum>>);
    let cases: [Case; 4] = [
        (
            "wigner-d-first",
            first,
            Box::new(move || wigner_d(k, q, qp, EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI))),
        ),
        (
            "wigner-d-second",
            second,
            Box::new(move || wigner_d(k, q, qp, EulerAngles::new(1.5 * PI, PI / 2.0, PI / 4.0))),
        ),
        (
            "sphfun-xi-minus",
            first,
            Box::new(move || sphfun_named(Family::XiM, k, q, qp, x1, x2)),
        ),
        (
            "sphfun-zeta-plus",
            second,
            Box::new(move || sphfun_named(Family::ZetaP, k, q, qp, x1, x2)),
        ),
    ];
    cases
        .iter()
        .map(|(name, expected, f)| {
            let start = Instant::now();
            let v = f();
            let t = start.elapsed();
            let mut w = Worst::default();
            w.add_result(v.map(|v| (v - expected).norm()));
            w.check(name, 1e-12)
                .note(format!("{:.1} us", t.as_secs_f64() * 1e6))
        })
        .collect()
}

fn geometry(opts: &SuiteOptions) -> Vec<CheckResult> {
    let n = opts.grid.unwrap_or(20).max(1);
    let thetas: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect();
    let phis: Vec<f64> = (0..n).map(|j| j as f64 * TAU / n as f64).collect();
    let firsts: Vec<SpherePoint> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| point(t, p)))
        .collect();
    let (worst, missing) = firsts
        .par_iter()
        .map(|&x1| {
            let mut w = Worst::default();
            let mut missing = 0usize;
            for &x2 in &firsts {
                match euler_from_points(x1, x2) {
                    Ok(sols) if !sols.is_empty() => {
                        for s in sols {
                            let v = mat_vec(&rotation_matrix_zxz(s.omega), x1.unit_vector());
                            let target = x2.unit_vector();
                            w.add((0..3).map(|i| (v[i] - target[i]).abs()).fold(0.0, f64::max));
                        }
                    }
                    _ => {
                        missing += 1;
                        w.add(f64::INFINITY);
                    }
                }
            }
            (w, missing)
        })
        .reduce(|| (Worst::default(), 0), |a, b| (a.0.merge(b.0), a.1 + b.1));
    vec![worst
        .check("rotation-maps-r1-to-r2", 1e-12)
        .note(format!("{n}^4 grid, {missing} pairs without a solution"))]
}

fn branch_agreement(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut branches, mut omega1) = (Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(500) {
        let (x1, x2) = rand_pair(&mut rng);
        let k = rand_rank(&mut rng, 6);
        let (q, qp) = (rand_proj(&mut rng, k), rand_proj(&mut rng, k));
        match euler_from_points(x1, x2) {
            Ok(sols) => {
                for s in sols {
                    let spec = SphFunSpec {
                        branch: s.branch,
                        k,
                        q,
                        qp,
                    };
                    branches.add_result(
                        sphfun_general(&spec, x1, x2)
                            .and_then(|a| Ok((a - wigner_d(k, q, qp, s.omega)?).norm())),
                    );
                }
            }
            Err(_) => branches.add(f64::INFINITY),
        }
        omega1.add_result(
            omega1_solution(x1, x2)
                .and_then(|s| Ok((eta(k, q, qp, x1, x2)? - wigner_d(k, q, qp, s.omega)?).norm())),
        );
    }
    vec![
        branches.check("every-applicable-branch", 1e-12),
        omega1.check("eta-vs-omega1-angles", 1e-12),
    ]
}

fn unitarity_error(m: &[Vec<CNum>]) -> f64 {
    let n = m.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let s: CNum = (0..n).map(|q| m[q][a].conj() * m[q][b]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

fn unitarity(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut d, mut e, mut norm) = (Worst::default(), Worst::default(), Worst::default());
    for twice in 0..=12 {
        let k = h(twice);
        for _ in 0..opts.draws_or(10) {
            d.add_result(wigner_d_matrix(k, rand_omega(&mut rng)).map(|m| unitarity_error(&m)));
            let (x1, x2) = rand_pair(&mut rng);
            e.add_result(family_matrix(Family::Eta, k, x1, x2).map(|m| unitarity_error(&m)));
            let v: Vec<CNum> = k
                .projections()
                .map(|_| CNum::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let before: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            norm.add_result(
                transform_tensor(Family::Eta, k, &v, x1, x2)
                    .map(|w| (w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() - before).abs()),
            );
        }
    }
    vec![
        d.check("d-matrix", 1e-12),
        e.check("eta-matrix", 1e-12),
        norm.check("tensor-norm", 1e-12),
    ]
}

fn conjugation(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut conj, mut shift) = (Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(500) {
        let k = rand_rank(&mut rng, 12);
        let (q, qp) = (rand_proj(&mut rng, k), rand_proj(&mut rng, k));
        let om = rand_omega(&mut rng);
        let phase = sign_pow(i64::from((q.twice - qp.twice) / 2));
        conj.add_result((|| {
            Ok((wigner_d(k, q, qp, om)?.conj() - wigner_d(k, -q, -qp, om)? * phase).norm())
        })());
        let shifted = EulerAngles::new(om.phi, om.theta + TAU, om.psi);
        let sign = sign_pow(i64::from(k.twice));
        shift.add_result((|| {
            Ok((wigner_d(k, q, qp, shifted)? - wigner_d(k, q, qp, om)? * sign).norm())
        })());
    }
    vec![
        conj.check("conjugation", 1e-12),
        shift.check("theta-2pi-shift", 1e-12),
    ]
}

fn mat_diff(a: &[Vec<CNum>], b: &[Vec<CNum>], sign: f64) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(move |(x, y)| (x - y * sign).norm()))
        .fold(0.0, f64::max)
}

fn composition(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut int, mut half, mut half_signed) =
        (Worst::default(), Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(200) {
        let k = rand_rank(&mut rng, 6);
        let (o1, o2) = (rand_omega(&mut rng), rand_omega(&mut rng));
        let o3 = euler_from_matrix(&mat_mul(&rotation_matrix_zxz(o1), &rotation_matrix_zxz(o2)));
        let r: Result<(f64, f64)> = (|| {
            let (a, b, c) = (
                wigner_d_matrix(k, o1)?,
                wigner_d_matrix(k, o2)?,
                wigner_d_matrix(k, o3)?,
            );
            let n = a.len();
            let prod: Vec<Vec<CNum>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum())
                        .collect()
                })
                .collect();
            Ok((mat_diff(&prod, &c, 1.0), mat_diff(&prod, &c, -1.0)))
        })();
        match (k.is_integer(), r) {
            (true, Ok((plus, _))) => int.add(plus),
            (false, Ok((plus, minus))) => {
                half.add(plus.min(minus));
                half_signed.add(plus);
            }
            (true, Err(_)) => int.add(f64::INFINITY),
            (false, Err(_)) => half.add(f64::INFINITY),
        }
    }
    vec![
        int.check("integer-rank", 1e-10),
        half.check("half-integer-rank-up-to-sign", 1e-10),
        half_signed
            .check("half-integer-rank-signed", 1e-10)
            .informational()
            .note("a 3x3 rotation fixes the SU(2) element only up to sign"),
    ]
}

fn general(
    family: Family,
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    sphfun_general(
        &SphFunSpec {
            branch: family.tuple(x2),
            k,
            q,
            qp,
        },
        x1,
        x2,
    )
}

fn relations(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let mut xi = Worst::default();
    let mut theta = Worst::default();
    let (mut zeta_int, mut zeta_half) = (Worst::default(), Worst::default());
    let (mut rel_a, mut rel_b, mut eta_pm) = (Worst::default(), Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(300) {
        let (x1, x2) = rand_pair(&mut rng);
        let k = rand_rank(&mut rng, 12);
        let (q, qp) = (rand_proj(&mut rng, k), rand_proj(&mut rng, k));
        let mirror = sign_pow(i64::from((qp.twice - q.twice) / 2));
        xi.add_result((|| {
            Ok((general(Family::XiM, k, q, qp, x1, x2)?
                - general(Family::XiP, k, q, qp, x1, x2)? * mirror)
                .norm())
        })());
        theta.add_result((|| {
            Ok((general(Family::ThetaP, k, q, qp, x1, x2)?
                - general(Family::XiM, k, q, qp, x1, x2)?)
            .norm())
        })());
        let z = (|| {
            let sign = sign_pow(i64::from(qp.twice));
            Ok((general(Family::ZetaM, k, q, qp, x1, x2)?
                - general(Family::ZetaP, k, q, qp, x1, x2)? * sign)
                .norm())
        })();
        if k.is_integer() {
            zeta_int.add_result(z);
        } else {
            zeta_half.add_result(z);
        }
        rel_a.add_result((|| {
            Ok((sphfun_named(Family::XiM, k, q, qp, x1, x2)?
                - sphfun_named(Family::XiP, k, -q, -qp, x1, x2)?.conj())
            .norm())
        })());
        rel_b.add_result((|| {
            let (p, m) = (
                family_matrix(Family::XiP, k, x1, x2)?,
                family_matrix(Family::XiM, k, x1, x2)?,
            );
            let n = p.len();
            let mut worst: f64 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let s: CNum = p
                        .iter()
                        .zip(m.iter().rev())
                        .map(|(pr, mr)| pr[a] * mr[n - 1 - b])
                        .sum();
                    worst = worst.max((s - if a == b { 1.0 } else { 0.0 }).norm());
                }
            }
            Ok(worst)
        })());
        eta_pm.add_result((|| {
            Ok((eta_plus(k, q, qp, x1, x2)? - eta_minus(k, q, qp, x1, x2)?).norm())
        })());
    }
    vec![
        xi.check("rel-xi-minus-vs-plus", 1e-12),
        theta.check("rel-theta-plus-vs-xi-minus", 1e-12),
        zeta_int.check("rel-zeta-minus-vs-plus-integer-rank", 1e-12),
        zeta_half
            .check("rel-zeta-minus-vs-plus-half-integer-rank", 1e-12)
            .note("the sign (-1)^{2q'} does not hold when k is a half-integer"),
        rel_a.check("rel-a-conjugation", 1e-12),
        rel_b.check("rel-b-orthonormal-columns", 1e-12),
        eta_pm.check("eta-plus-equals-eta-minus", 1e-12),
    ]
}

fn rand_rcgc(rng: &mut StdRng, max_twice: i32) -> RcgcIndices {
    let l1 = rand_rank(rng, max_twice);
    let l2 = rand_rank(rng, max_twice);
    let ranks: Vec<HalfInt> = Triangle::coupled_ranks(l1, l2).collect();
    let l = ranks[rng.random_range(0..ranks.len())];
    RcgcIndices {
        l1,
        l2,
        l,
        m1: rand_proj(rng, l1),
        m2: rand_proj(rng, l2),
        m: rand_proj(rng, l),
    }
}

fn reduction(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut product, mut rcgc_product) = (Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(100) {
        let (x1, x2) = rand_pair(&mut rng);
        let family = Family::ALL[rng.random_range(0..Family::ALL.len())];
        let (k1, k2) = (rand_rank(&mut rng, 4), rand_rank(&mut rng, 4));
        let (q1, q1p) = (rand_proj(&mut rng, k1), rand_proj(&mut rng, k1));
        let (q2, q2p) = (rand_proj(&mut rng, k2), rand_proj(&mut rng, k2));
        product.add_result((|| {
            let sum: CNum = sphfun_reduce(family, k1, q1, q1p, k2, q2, q2p, x1, x2)?
                .values()
                .sum();
            let prod = sphfun_named(family, k1, q1, q1p, x1, x2)?
                * sphfun_named(family, k2, q2, q2p, x1, x2)?;
            Ok((sum - prod).norm())
        })());
        let (a, b) = (rand_rcgc(&mut rng, 4), rand_rcgc(&mut rng, 4));
        rcgc_product.add_result((|| {
            let sum: CNum = rcgc1_product_reduce(&a, &b, x1, x2)?.values().sum();
            Ok((sum - a.eval(x1, x2)? * b.eval(x1, x2)?).norm())
        })());
    }
    vec![
        product.check("spherical-function-product", 1e-11),
        rcgc_product.check("rotated-coefficient-product", 1e-11),
    ]
}

/// Quadrature settings of the sphere-integral comparisons.
pub fn s_integral_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        nodes_theta: 16,
        nodes_phi: 16,
        refine_tol: 1e-9,
        max_refinements: 4,
    }
}

fn s_integral_suite() -> Vec<CheckResult> {
    let thetas = [PI / 6.0, PI / 2.0, 0.75 * PI];
    let phis = [0.3, 2.0, 5.0];
    let mut cases = Vec::new();
    for twice in 0..=6 {
        let k = h(twice);
        for q in k.projections() {
            for qp in k.projections() {
                for &t in &thetas {
                    for &p in &phis {
                        cases.push((k, q, qp, point(t, p)));
                    }
                }
            }
        }
    }
    let spec = s_integral_quadrature();
    type Row = (HalfInt, HalfInt, HalfInt, Result<CNum>, Result<CNum>);
    let rows: Vec<Row> = cases
        .par_iter()
        .map(|&(k, q, qp, x1)| {
            (
                k,
                q,
                qp,
                s_integral(k, q, qp, x1),
                s_integral_oracle(k, q, qp, x1, &spec),
            )
        })
        .collect();
    let (mut sweep, mut four_pi, mut sel_exact, mut sel_oracle) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    let mut sel_nonzero = 0usize;
    for (k, q, qp, closed, oracle) in &rows {
        sweep.add_result(match (closed, oracle) {
            (Ok(a), Ok(b)) => Ok((a - b).norm()),
            _ => Err(Error::domain("evaluation failed")),
        });
        if k.twice == 0 {
            four_pi.add_result(closed.clone().map(|v| (v - 4.0 * PI).norm()));
        }
        let forbidden = k.is_integer() && (q.twice != 0 || (qp.twice / 2) % 2 != 0);
        if forbidden {
            let v = closed.clone().map(|v| v.norm());
            if matches!(v, Ok(x) if x != 0.0) {
                sel_nonzero += 1;
            }
            sel_exact.add_result(v);
            sel_oracle.add_result(oracle.clone().map(|v| v.norm()));
        }
    }
    vec![
        sweep.check("closed-form-vs-quadrature", 1e-7),
        four_pi.check("rank-zero-is-4pi", 1e-12),
        sel_exact
            .check("selection-rule-exact-zero", 0.0)
            .note(format!(
                "{sel_nonzero} of {} forbidden cases are nonzero",
                sel_exact.n
            )),
        sel_oracle.check("selection-rule-quadrature", 1e-7),
    ]
}

/// `int_0^pi sin(t) cos^{2k-m}(-t/2) sin^m(-t/2) dt` through the Beta function.
fn beta_form(kernel: &PIKernel) -> Result<f64> {
    let m = kernel.m() as f64;
    let k2 = f64::from(kernel.k.twice);
    Ok(sign_pow(kernel.m())
        * 2.0
        * crate::halfint_algebra::beta(m / 2.0 + 1.0, (k2 - m) / 2.0 + 1.0)?)
}

fn boundary(opts: &SuiteOptions) -> Vec<CheckResult> {
    let (mut closed_q, mut beta_w, mut mirror, mut mirror_q) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    for twice in 0..=8 {
        let k = h(twice);
        for q in k.projections() {
            for qp in k.projections() {
                for p in p_range(k, q, qp) {
                    let at = |theta1| PIKernel {
                        k,
                        q,
                        qp,
                        p,
                        theta1,
                        a: 0.0,
                        b: PI,
                        gamma: Sign::Plus,
                    };
                    let (k0, kpi) = (at(0.0), at(PI));
                    closed_q.add_result((|| Ok((p_i(&k0)? - p_i_quadrature(&k0)?).abs()))());
                    beta_w.add_result((|| Ok((p_i(&k0)? - beta_form(&k0)?).abs()))());
                    let sign = sign_pow(i64::from((q.twice - qp.twice) / 2));
                    mirror.add_result((|| Ok((p_i(&kpi)? - sign * p_i(&k0)?).abs()))());
                    mirror_q.add_result((|| Ok((p_i(&kpi)? - p_i_quadrature(&kpi)?).abs()))());
                }
            }
        }
    }
    let mut power_beta = Worst::default();
    for twice in 0..=8 {
        for g in 0..=6u32 {
            let k = h(twice);
            power_beta.add_result((|| {
                let q = quad_1d(
                    |t| t.sin().powi(twice + 1) * t.cos().powi(g as i32),
                    0.0,
                    PI,
                    1e-14,
                )?;
                Ok((pinchon_check(k, g)? - q).abs())
            })());
        }
    }
    let mut rng = opts.rng();
    let mut random = Worst::default();
    for _ in 0..opts.draws_or(200) {
        let k = rand_rank(&mut rng, 6);
        let (q, qp) = (rand_proj(&mut rng, k), rand_proj(&mut rng, k));
        let ps: Vec<i64> = p_range(k, q, qp).collect();
        let (a, b) = {
            let (u, v) = (rng.random_range(0.0..=PI), rng.random_range(0.0..=PI));
            (u.min(v), u.max(v))
        };
        let kernel = PIKernel {
            k,
            q,
            qp,
            p: ps[rng.random_range(0..ps.len())],
            theta1: rng.random_range(0.0..=PI),
            a,
            b,
            gamma: Sign::Plus,
        };
        random.add_result((|| Ok((p_i(&kernel)? - p_i_quadrature(&kernel)?).abs()))());
    }
    vec![
        closed_q.check("theta1-zero-vs-quadrature", 1e-10),
        beta_w.check("theta1-zero-beta-form", 1e-10),
        mirror.check("theta1-pi-mirror", 1e-12),
        mirror_q.check("theta1-pi-vs-quadrature", 1e-10),
        power_beta.check("sine-cosine-power-beta-integral", 1e-10),
        random.check("random-kernels-vs-quadrature", 1e-10),
    ]
}

fn hypergeometric(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let mut w = Worst::default();
    for _ in 0..opts.draws_or(1000) {
        let k = rand_rank(&mut rng, 9);
        let (q, qp) = (rand_proj(&mut rng, k), rand_proj(&mut rng, k));
        let om = rand_omega(&mut rng);
        w.add_result((|| {
            Ok((wigner_d_hyp(k, q, qp, om)? - wigner_d(k, q, qp, om)?).norm())
        })());
    }
    vec![w.check("hypergeometric-vs-sum", 1e-11)]
}

fn y_vector(l: HalfInt, x: SpherePoint) -> Result<Vec<CNum>> {
    l.projections().map(|m| y_harmonic(l, m, x)).collect()
}

fn redmat(opts: &SuiteOptions) -> Vec<CheckResult> {
    let north = point(0.0, 0.0);
    let spec = QuadratureSpec::default();
    let mut cases = Vec::new();
    for l in 0..=3 {
        for lb in 0..=3 {
            for k in 0..=4 {
                cases.push((HalfInt::int(l), HalfInt::int(k), HalfInt::int(lb)));
            }
        }
    }
    let gaunt: Vec<Result<f64>> = cases
        .par_iter()
        .map(|&(l, k, lb)| {
            let closed = reduced_matrix_element(l, k, lb, &c_harmonic_vector(k, north)?)?;
            Ok((closed - reduced_element_oracle(l, k, lb, &spec)?).norm())
        })
        .collect();
    let mut gaunt_err = Worst::default();
    for g in gaunt {
        gaunt_err.add_result(g);
    }

    let mut rng = opts.rng();
    let (mut spread, mut we, mut c4) = (Worst::default(), Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(12) {
        let (l, k) = (rand_int_rank(&mut rng, 2), rand_int_rank(&mut rng, 2));
        let ranks: Vec<HalfInt> = Triangle::coupled_ranks(l, k).collect();
        let lb = ranks[rng.random_range(0..ranks.len())];
        let m = rand_proj(&mut rng, l);
        let mb = rand_proj(&mut rng, lb);
        let q = m - mb;
        if q.twice.abs() > k.twice {
            continue;
        }
        let r: Result<(f64, f64, f64)> = (|| {
            let t0 = c_harmonic_vector(k, north)?;
            let reduced = reduced_matrix_element(l, k, lb, &t0)?;
            let expect = reduced * sign_pow(i64::from(k.twice)) * cgc(lb, mb, k, q, l, m)?;
            let mut values = Vec::new();
            let mut c4_err: f64 = 0.0;
            for _ in 0..3 {
                let xp = rand_point(&mut rng);
                let (pb, t, pk) = (
                    y_vector(l, xp)?,
                    c_harmonic_vector(k, xp)?,
                    y_vector(lb, xp)?,
                );
                values.push(matrix_element_at_point(
                    l, m, k, q, lb, mb, &pb, &t, &pk, xp,
                )?);
                c4_err = c4_err.max(
                    (reduced_matrix_element_by_orthogonality(l, k, lb, &pb, &t, &pk)? - reduced)
                        .norm(),
                );
            }
            let s = values
                .iter()
                .map(|v| (v - values[0]).norm())
                .fold(0.0, f64::max);
            Ok((s, (values[0] - expect).norm(), c4_err))
        })();
        match r {
            Ok((s, e, c)) => {
                spread.add(s);
                we.add(e);
                c4.add(c);
            }
            Err(_) => {
                spread.add(f64::INFINITY);
                we.add(f64::INFINITY);
                c4.add(f64::INFINITY);
            }
        }
    }
    vec![
        gaunt_err.check("closed-form-vs-gaunt-quadrature", 1e-9),
        spread.check("point-independence", 1e-9),
        we.check("assembled-element-vs-wigner-eckart", 1e-9),
        c4.check("orthogonality-form-vs-closed-form", 1e-9),
    ]
}

/// Quadrature settings of the two-electron comparison.
pub fn coulomb_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        nodes_theta: 16,
        nodes_phi: 16,
        refine_tol: 1e-8,
        max_refinements: 3,
    }
}

fn coulomb() -> Vec<CheckResult> {
    let spec = coulomb_quadrature();
    let (mut agree, mut printed) = (Worst::default(), Worst::default());
    let (mut t_closed, mut t_oracle) = (Duration::ZERO, Duration::ZERO);
    for l in 0..=1 {
        for lp in 0..=1 {
            for m in -l..=l {
                for mp in -lp..=lp {
                    let (li, mi, lpi, mpi) = (
                        HalfInt::int(l),
                        HalfInt::int(m),
                        HalfInt::int(lp),
                        HalfInt::int(mp),
                    );
                    let g = RadialWeight::delta0(li).with_radii(0.5, 1.0);
                    let gp = RadialWeight::delta0(lpi).with_radii(0.5, 1.0);
                    let k_max = l + lp;
                    let start = Instant::now();
                    let closed = coulomb_2e_angular(li, mi, lpi, mpi, &g, &gp, k_max);
                    t_closed += start.elapsed();
                    let start = Instant::now();
                    let oracle = coulomb_oracle(li, mi, lpi, mpi, &g, &gp, k_max as u32, &spec);
                    t_oracle += start.elapsed();
                    let as_printed =
                        coulomb_2e_angular_as_printed(li, mi, lpi, mpi, &g, &gp, k_max);
                    match (closed, oracle, as_printed) {
                        (Ok(c), Ok(o), Ok(p)) => {
                            agree.add((c - o).norm());
                            printed.add((p - o).norm());
                        }
                        _ => {
                            agree.add(f64::INFINITY);
                            printed.add(f64::INFINITY);
                        }
                    }
                }
            }
        }
    }
    let ratio = t_oracle.as_secs_f64() / t_closed.as_secs_f64().max(1e-9);
    let mut speed = Worst::default();
    speed.add(50.0 / ratio);
    vec![
        agree.check("closed-form-vs-4d-quadrature", 1e-6),
        speed.check("speedup-at-least-50x", 1.0).note(format!(
            "closed form {:.2} ms, quadrature {:.1} ms, ratio {ratio:.0}",
            t_closed.as_secs_f64() * 1e3,
            t_oracle.as_secs_f64() * 1e3
        )),
        printed
            .check("literal-contraction-vs-4d-quadrature", 1e-6)
            .informational()
            .note("alternative literal index pattern, reported only"),
    ]
}

fn cgc_suite() -> Vec<CheckResult> {
    let mut w = Worst::default();
    for a in 0..=8 {
        for b in 0..=8 {
            let (j1, j2) = (h(a), h(b));
            for j in Triangle::coupled_ranks(j1, j2) {
                for m1 in j1.projections() {
                    for m2 in j2.projections() {
                        let m = m1 + m2;
                        if m.twice.abs() > j.twice {
                            continue;
                        }
                        let exact = cgc_exact(j1, m1, j2, m2, j, m).to_f64();
                        w.add_result(cgc(j1, m1, j2, m2, j, m).map(|v| (v - exact).abs()));
                    }
                }
            }
        }
    }
    let mut big = Worst::default();
    for (a, b, c) in [(40, 38, 30), (61, 59, 50), (100, 100, 100)] {
        let (j1, j2, j) = (h(a), h(b), h(c));
        for (m1, m2) in [
            (h(a % 2), h(b % 2)),
            (h(a - 2), h(-b + 4)),
            (h(-a + 2), h(b - 2)),
        ] {
            let m = m1 + m2;
            let exact = cgc_exact(j1, m1, j2, m2, j, m).to_f64();
            big.add_result(cgc(j1, m1, j2, m2, j, m).map(|v| (v - exact).abs()));
        }
    }
    vec![
        w.check("all-ranks-up-to-4", 1e-14),
        big.check("large-ranks", 1e-14),
    ]
}

fn rcgc_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = opts.rng();
    let (mut product, mut second, mut zero) =
        (Worst::default(), Worst::default(), Worst::default());
    for _ in 0..opts.draws_or(20) {
        let (x1, x2) = rand_pair(&mut rng);
        let (l1, l2) = (rand_int_rank(&mut rng, 2), rand_int_rank(&mut rng, 2));
        let (m1, m2) = (rand_proj(&mut rng, l1), rand_proj(&mut rng, l2));
        product.add_result((|| {
            let lhs = c_harmonic(l1, m1, x1)? * c_harmonic(l2, m2, x2)?;
            let mut rhs = CNum::new(0.0, 0.0);
            for l in Triangle::coupled_ranks(l1, l2) {
                for m in l.projections() {
                    rhs += coupled_c(l1, l2, l, m, x1)? * rcgc1(l1, l2, l, m1, m2, m, x1, x2)?;
                }
            }
            Ok((lhs - rhs).norm())
        })());
        let ranks: Vec<HalfInt> = Triangle::coupled_ranks(l1, l2).collect();
        let l = ranks[rng.random_range(0..ranks.len())];
        let m = rand_proj(&mut rng, l);
        second.add_result((|| {
            let mut coupled = CNum::new(0.0, 0.0);
            for a in l1.projections() {
                let b = m - a;
                if b.twice.abs() <= l2.twice {
                    coupled +=
                        c_harmonic(l1, a, x1)? * c_harmonic(l2, b, x2)? * cgc(l1, a, l2, b, l, m)?;
                }
            }
            let mut rhs = CNum::new(0.0, 0.0);
            for lp in Triangle::coupled_ranks(l1, l2) {
                for mp in lp.projections() {
                    rhs += coupled_c(l1, l2, lp, mp, x1)? * rcgc2(l1, l2, lp, l, mp, m, x1, x2)?;
                }
            }
            Ok((coupled - rhs).norm())
        })());
        let z = HalfInt::ZERO;
        let ml = rand_proj(&mut rng, l1);
        zero.add_result((|| Ok((rcgc1(l1, z, l1, ml, z, ml, x1, x2)? - 1.0).norm()))());
    }
    vec![
        product.check("product-expansion", 1e-10),
        second.check("coupled-product-expansion", 1e-10),
        zero.check("rank-zero-collapse", 1e-14),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn worst_treats_nan_as_failure() {
        let mut w = Worst::default();
        w.add(1e-3);
        w.add(f64::NAN);
        w.add(1.0);
        assert!(w.max.is_infinite());
        assert!(!w.check("x", 1.0).passed);
    }
}
