//! Euler angles of the rotations that carry one unit vector between two frames.
//!
//! A vector with spherical coordinates `x1 = (theta1, phi1)` in the fixed frame
//! `K1` and `x2 = (theta2, phi2)` in the rotated frame `K2` is related by
//! `r2 = R(Omega) r1`. The admissible Euler triples are
//!
//! ```text
//! Phi   = phi2 + alpha pi/2
//! Theta = beta (theta1 - gamma theta2) + 2 pi n
//! Psi   = -phi1 + delta pi/2 + 2 pi n'
//! ```
//!
//! with one sign tuple `(alpha, beta, gamma, delta, n)` per branch. The rows for
//! `O11p` and `O12m` use `beta` opposite to the literal sign table, because the
//! literal signs describe the mirror rotation and do not satisfy
//! `R r1 = r2`. [`BranchSpec::as_printed`] keeps the literal rows for comparison.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wigner::EulerAngles;

/// A point on the unit sphere, `theta` in `[0, pi]` and `phi` in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    /// Polar angle.
    pub theta: f64,
    /// Azimuth.
    pub phi: f64,
}

impl SpherePoint {
    /// Builds a point, reducing `phi` into `[0, 2 pi)`.
    ///
    /// `theta` outside `[0, pi]` (beyond a `1e-12` rounding allowance) is a domain error.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::domain("non-finite sphere coordinates"));
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::domain(format!("theta = {theta} outside [0, pi]")));
        }
        Ok(SpherePoint {
            theta: theta.clamp(0.0, PI),
            phi: wrap_angle(phi).0,
        })
    }

    /// Cartesian unit vector `(sin theta cos phi, sin theta sin phi, cos theta)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (s, c) = self.theta.sin_cos();
        [s * self.phi.cos(), s * self.phi.sin(), c]
    }

    /// The point whose unit vector is `v` (normalized first).
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::domain("zero or non-finite vector"));
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        SpherePoint::new(theta, v[1].atan2(v[0]))
    }
}

/// Reduces `x` into `[0, 2 pi)` and returns the number of turns `w` with `x + 2 pi w` the result.
pub fn wrap_angle(x: f64) -> (f64, i32) {
    let turns = (x / TAU).floor();
    let mut y = x - turns * TAU;
    let mut w = -(turns as i32);
    if y >= TAU {
        y -= TAU;
        w -= 1;
    }
    if y < 0.0 {
        y += TAU;
        w += 1;
    }
    (y, w)
}

/// A sign `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// `+1`.
    Plus,
    /// `-1`.
    Minus,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// The same sign as a float.
    pub fn f(self) -> f64 {
        f64::from(self.value())
    }

    /// The opposite sign.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// The six branches of the coordinate-pair map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchLabel {
    /// `theta1 >= theta2`, `phi2` in `[0, pi]`.
    O11p,
    /// `theta1 >= theta2`, `phi2` in `(pi, 2 pi)`.
    O12p,
    /// `theta2 >= theta1`, `phi2` in `[0, pi]`.
    O11m,
    /// `theta2 >= theta1`, `phi2` in `(pi, 2 pi)`.
    O12m,
    /// `theta1 + theta2` in `(0, pi]`.
    O2p,
    /// `theta1 + theta2` in `[pi, 2 pi]`.
    O2m,
}

impl BranchLabel {
    /// All labels in canonical order.
    pub const ALL: [BranchLabel; 6] = [
        BranchLabel::O11p,
        BranchLabel::O12p,
        BranchLabel::O11m,
        BranchLabel::O12m,
        BranchLabel::O2p,
        BranchLabel::O2m,
    ];

    /// True for the four `Omega_1` branches.
    pub fn is_omega1(self) -> bool {
        !matches!(self, BranchLabel::O2p | BranchLabel::O2m)
    }

    /// Whether this branch's domain condition holds for the pair.
    pub fn applies(self, x1: SpherePoint, x2: SpherePoint) -> bool {
        let first_half = x2.phi <= PI;
        let sum = x1.theta + x2.theta;
        match self {
            BranchLabel::O11p => x1.theta >= x2.theta && first_half,
            BranchLabel::O12p => x1.theta >= x2.theta && !first_half,
            BranchLabel::O11m => x2.theta >= x1.theta && first_half,
            BranchLabel::O12m => x2.theta >= x1.theta && !first_half,
            BranchLabel::O2p => sum > 0.0 && sum <= PI,
            BranchLabel::O2m => sum >= PI,
        }
    }
}

/// The parameter tuple `(n, n'; alpha, beta, gamma, delta)` of one branch.
///
/// `phi_winding` records how many full turns were added to `Phi` when it was
/// reduced into `[0, 2 pi)`. For half-integer `q` a turn of `Phi` changes
/// `D^k_{qq'}` by `(-1)^{2q}`, so the winding is carried along for the
/// spherical functions to reproduce `D` at the reduced angles exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchSpec {
    /// Winding of `Theta`, from the table.
    pub n: i32,
    /// Winding of `Psi`.
    pub n_prime: i32,
    /// Winding of `Phi`.
    pub phi_winding: i32,
    /// Sign in `Phi = phi2 + alpha pi/2`.
    pub alpha: Sign,
    /// Sign in front of `theta1 - gamma theta2`.
    pub beta: Sign,
    /// Sign of `theta2` inside `Theta`.
    pub gamma: Sign,
    /// Sign in `Psi = -phi1 + delta pi/2`.
    pub delta: Sign,
    /// Which branch this is.
    pub label: BranchLabel,
}

impl BranchSpec {
    const fn row(label: BranchLabel, t: [Sign; 4], n: i32) -> Self {
        BranchSpec {
            n,
            n_prime: 0,
            phi_winding: 0,
            alpha: t[0],
            beta: t[1],
            gamma: t[2],
            delta: t[3],
            label,
        }
    }

    /// The branch tuple used by this crate, with zero windings.
    pub fn table(label: BranchLabel) -> Self {
        use Sign::{Minus as M, Plus as P};
        match label {
            BranchLabel::O11p => Self::row(label, [P, M, P, M], 0),
            BranchLabel::O12p => Self::row(label, [M, P, P, P], 0),
            BranchLabel::O11m => Self::row(label, [P, M, P, M], 0),
            BranchLabel::O12m => Self::row(label, [M, P, P, P], 0),
            BranchLabel::O2p => Self::row(label, [P, P, M, P], 0),
            BranchLabel::O2m => Self::row(label, [M, M, M, M], 1),
        }
    }

    /// The literal sign-table tuple, with zero windings.
    ///
    /// The `O11p` and `O12m` rows of this table rotate `r1` into the mirror image
    /// of `r2`; they are kept for comparison tests only.
    pub fn as_printed(label: BranchLabel) -> Self {
        use Sign::{Minus as M, Plus as P};
        match label {
            BranchLabel::O11p => Self::row(label, [P, P, P, M], 0),
            BranchLabel::O12m => Self::row(label, [M, M, P, P], 0),
            other => Self::table(other),
        }
    }

    /// A free-standing tuple (for the named spherical-function families).
    pub fn custom(
        label: BranchLabel,
        n: i32,
        n_prime: i32,
        alpha: Sign,
        beta: Sign,
        gamma: Sign,
        delta: Sign,
    ) -> Self {
        BranchSpec {
            n,
            n_prime,
            phi_winding: 0,
            alpha,
            beta,
            gamma,
            delta,
            label,
        }
    }

    /// The Euler angles this tuple assigns to a coordinate pair, windings included.
    pub fn euler(&self, x1: SpherePoint, x2: SpherePoint) -> EulerAngles {
        EulerAngles {
            phi: x2.phi + self.alpha.f() * FRAC_PI_2 + TAU * f64::from(self.phi_winding),
            theta: self.beta.f() * (x1.theta - self.gamma.f() * x2.theta) + TAU * f64::from(self.n),
            psi: -x1.phi + self.delta.f() * FRAC_PI_2 + TAU * f64::from(self.n_prime),
        }
    }

    /// The same tuple with `Phi` and `Psi` windings chosen so both lie in `[0, 2 pi)`.
    pub fn with_reducing_windings(mut self, x1: SpherePoint, x2: SpherePoint) -> Self {
        self.phi_winding = 0;
        self.n_prime = 0;
        let raw = self.euler(x1, x2);
        self.phi_winding = wrap_angle(raw.phi).1;
        self.n_prime = wrap_angle(raw.psi).1;
        self
    }
}

/// One Euler-angle solution for a coordinate pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometrySolution {
    /// The branch tuple, with the windings that reduce `Phi` and `Psi`.
    pub branch: BranchSpec,
    /// `Phi`, `Psi` in `[0, 2 pi)`; `Theta` signed as produced by the branch.
    pub omega: EulerAngles,
    /// Whether the branch's domain condition holds for the pair.
    pub applicable: bool,
}

fn solution(label: BranchLabel, x1: SpherePoint, x2: SpherePoint) -> GeometrySolution {
    let branch = BranchSpec::table(label).with_reducing_windings(x1, x2);
    let mut omega = branch.euler(x1, x2);
    // Guard against the reduced values landing one ulp outside [0, 2 pi).
    omega.phi = wrap_angle(omega.phi).0;
    omega.psi = wrap_angle(omega.psi).0;
    GeometrySolution {
        branch,
        omega,
        applicable: label.applies(x1, x2),
    }
}

fn check_degenerate(x1: SpherePoint, x2: SpherePoint) -> Result<()> {
    if x1.theta == 0.0 && x2.theta == 0.0 {
        return Err(Error::Degenerate(
            "any Phi, Psi with Theta = 0 maps the pole onto itself".into(),
        ));
    }
    Ok(())
}

/// Every branch whose domain condition holds for `(x1, x2)`, in canonical order.
///
/// At least one `Omega_1` and one `Omega_2` branch always apply. Both points on
/// the north pole is the degenerate case and is rejected.
pub fn euler_from_points(x1: SpherePoint, x2: SpherePoint) -> Result<Vec<GeometrySolution>> {
    check_degenerate(x1, x2)?;
    Ok(BranchLabel::ALL
        .iter()
        .map(|&l| solution(l, x1, x2))
        .filter(|s| s.applicable)
        .collect())
}

/// All six branches for `(x1, x2)` with their applicability flags.
pub fn all_branches(x1: SpherePoint, x2: SpherePoint) -> Result<Vec<GeometrySolution>> {
    check_degenerate(x1, x2)?;
    Ok(BranchLabel::ALL
        .iter()
        .map(|&l| solution(l, x1, x2))
        .collect())
}

/// The first applicable `Omega_1` branch (canonical order prefers `Omega_11`).
pub fn omega1_solution(x1: SpherePoint, x2: SpherePoint) -> Result<GeometrySolution> {
    euler_from_points(x1, x2)?
        .into_iter()
        .find(|s| s.branch.label.is_omega1())
        .ok_or_else(|| Error::domain("no Omega_1 branch applies"))
}

/// `R = R_z(Phi) R_x(Theta) R_z(Psi)`, acting on column vectors.
pub fn rotation_matrix_zxz(omega: EulerAngles) -> [[f64; 3]; 3] {
    let rz = |a: f64| {
        let (s, c) = a.sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    };
    let (s, c) = omega.theta.sin_cos();
    let rx = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]];
    mat_mul(&mat_mul(&rz(omega.phi), &rx), &rz(omega.psi))
}

/// Product of two 3x3 matrices.
pub fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    r
}

/// `R v` for a 3x3 matrix and a vector.
pub fn mat_vec(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| r[i][j] * v[j]).sum())
}

/// The `Psi` values that make `x1' = sin(theta1) cos(phi1 + Psi)` vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalPsi {
    /// The distinct roots in `[0, 2 pi)`, ascending.
    pub values: Vec<f64>,
    /// True when `sin(theta1) = 0`, so every `Psi` qualifies and `values` is the canonical set.
    pub any: bool,
}

/// Roots `Psi = -phi1 + sigma pi/2 + s pi (mod 2 pi)` of `sin(theta1) cos(phi1 + Psi) = 0`.
///
/// The four sign combinations collapse to two distinct values modulo `2 pi`.
pub fn optimal_psi(x1: SpherePoint) -> OptimalPsi {
    let mut values: Vec<f64> = [FRAC_PI_2, 3.0 * FRAC_PI_2]
        .iter()
        .map(|&s| wrap_angle(-x1.phi + s).0)
        .collect();
    values.sort_by(f64::total_cmp);
    OptimalPsi {
        values,
        any: x1.theta.sin().abs() < 1e-15,
    }
}

/// A `Theta` candidate from the `z2` equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaCandidate {
    /// Outer sign of the arccos.
    pub sigma1: Sign,
    /// Sign in front of the square root.
    pub sigma2: Sign,
    /// The value, or `None` when the arccos argument is out of range.
    pub value: Option<f64>,
    /// Whether substituting the value back satisfies `z2 = y1' sin(Theta) + z1 cos(Theta)`.
    pub satisfies_z: bool,
}

/// A `phi = Phi - pi/2` candidate from one of the two in-plane formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiCandidate {
    /// Which formula produced it (1 or 2).
    pub formula: u8,
    /// Outer sign of the arccos.
    pub sigma3: Sign,
    /// Sign of the second term.
    pub sigma4: Sign,
    /// The value, or `None` when inadmissible.
    pub value: Option<f64>,
}

/// Candidate angles for a fixed `Psi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSolutions {
    /// The gauge angle used.
    pub psi: f64,
    /// All four `Theta` candidates.
    pub theta: Vec<ThetaCandidate>,
    /// All eight `phi` candidates (four per formula).
    pub phi: Vec<PhiCandidate>,
    /// Values (in `[0, 2 pi)`) shared by both `phi` formulas.
    pub common_phi: Vec<f64>,
    /// `(Theta, Phi)` pairs that satisfy the full component system with this `Psi`.
    pub verified: Vec<(f64, f64)>,
}

struct Rotated {
    xp: f64,
    yp: f64,
    z1: f64,
    x2: f64,
    y2: f64,
    z2: f64,
}

fn rotated(x1: SpherePoint, x2: SpherePoint, psi: f64) -> Rotated {
    let [a, b, z1] = x1.unit_vector();
    let [x2c, y2c, z2] = x2.unit_vector();
    let (s, c) = psi.sin_cos();
    Rotated {
        xp: a * c - b * s,
        yp: a * s + b * c,
        z1,
        x2: x2c,
        y2: y2c,
        z2,
    }
}

const ADMISSIBLE_SLACK: f64 = 1e-12;

fn checked_acos(x: f64) -> Option<f64> {
    (x.is_finite() && x.abs() <= 1.0 + ADMISSIBLE_SLACK).then(|| x.clamp(-1.0, 1.0).acos())
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b).0;
    d.min(TAU - d)
}

/// Candidate `Theta` and `phi` values for a fixed gauge angle `Psi`.
///
/// With `x1' = x1 cos Psi - y1 sin Psi` and `y1' = x1 sin Psi + y1 cos Psi`:
///
/// ```text
/// Theta_{s1 s2} = s1 arccos[(z1 z2 + s2 |y1'| sqrt(z1^2 - z2^2 + y1'^2)) / (z1^2 + y1'^2)]
/// phi1_{s3 s4}  = s3 arccos[(x1' y2 + s4 |x2| sqrt(1 - x1'^2 - z2^2)) / (1 - z2^2)]
/// phi2_{s3 s4}  = s3 arccos[(x2 sqrt(1 - x1'^2 - z2^2) + s4 |x1' y2|) / (sgn(y1') (1 - z2^2))]
/// ```
///
/// The squared equations admit spurious roots, so every candidate is flagged
/// and the pairs that satisfy the full system are listed in `verified`. The
/// first `phi` formula always contains the in-plane angle of a genuine
/// solution; the second contains it only when `u' = y1' cos Theta - z1 sin Theta`
/// has the sign opposite to `y1'`.
pub fn partial_solutions(x1: SpherePoint, x2: SpherePoint, psi: f64) -> PartialSolutions {
    let r = rotated(x1, x2, psi);
    let signs = [Sign::Plus, Sign::Minus];
    let disc = r.z1 * r.z1 - r.z2 * r.z2 + r.yp * r.yp;
    let norm = r.z1 * r.z1 + r.yp * r.yp;
    let mut theta = Vec::new();
    for s1 in signs {
        for s2 in signs {
            let value = (disc >= -ADMISSIBLE_SLACK && norm > 0.0)
                .then(|| (r.z1 * r.z2 + s2.f() * r.yp.abs() * disc.max(0.0).sqrt()) / norm)
                .and_then(checked_acos)
                .map(|v| s1.f() * v);
            let satisfies_z =
                value.is_some_and(|t| (r.yp * t.sin() + r.z1 * t.cos() - r.z2).abs() < 1e-10);
            theta.push(ThetaCandidate {
                sigma1: s1,
                sigma2: s2,
                value,
                satisfies_z,
            });
        }
    }

    let rad = 1.0 - r.xp * r.xp - r.z2 * r.z2;
    let den = 1.0 - r.z2 * r.z2;
    let ok = rad >= -ADMISSIBLE_SLACK && den > 0.0;
    let sq = rad.max(0.0).sqrt();
    let mut phi = Vec::new();
    for s3 in signs {
        for s4 in signs {
            let v1 = ok
                .then(|| (r.xp * r.y2 + s4.f() * r.x2.abs() * sq) / den)
                .and_then(checked_acos)
                .map(|v| s3.f() * v);
            phi.push(PhiCandidate {
                formula: 1,
                sigma3: s3,
                sigma4: s4,
                value: v1,
            });
        }
    }
    for s3 in signs {
        for s4 in signs {
            let sgn = if r.yp > 0.0 {
                1.0
            } else if r.yp < 0.0 {
                -1.0
            } else {
                0.0
            };
            let v2 = (ok && sgn != 0.0)
                .then(|| (r.x2 * sq + s4.f() * (r.xp * r.y2).abs()) / (sgn * den))
                .and_then(checked_acos)
                .map(|v| s3.f() * v);
            phi.push(PhiCandidate {
                formula: 2,
                sigma3: s3,
                sigma4: s4,
                value: v2,
            });
        }
    }

    let first: Vec<f64> = phi
        .iter()
        .filter(|c| c.formula == 1)
        .filter_map(|c| c.value)
        .collect();
    let second: Vec<f64> = phi
        .iter()
        .filter(|c| c.formula == 2)
        .filter_map(|c| c.value)
        .collect();
    let mut common_phi: Vec<f64> = Vec::new();
    for &a in &first {
        if second.iter().any(|&b| angle_distance(a, b) < 1e-9)
            && !common_phi.iter().any(|&c| angle_distance(a, c) < 1e-9)
        {
            common_phi.push(wrap_angle(a).0);
        }
    }
    common_phi.sort_by(f64::total_cmp);

    let mut verified: Vec<(f64, f64)> = Vec::new();
    for t in theta
        .iter()
        .filter(|t| t.satisfies_z)
        .filter_map(|t| t.value)
    {
        for &p in &first {
            let big_phi = wrap_angle(p + FRAC_PI_2).0;
            let v = mat_vec(
                &rotation_matrix_zxz(EulerAngles::new(big_phi, t, psi)),
                x1.unit_vector(),
            );
            let target = x2.unit_vector();
            let err = (0..3).map(|i| (v[i] - target[i]).abs()).fold(0.0, f64::max);
            let dup = verified
                .iter()
                .any(|&(a, b)| (a - t).abs() < 1e-9 && angle_distance(b, big_phi) < 1e-9);
            if err < 1e-10 && !dup {
                verified.push((t, big_phi));
            }
        }
    }

    PartialSolutions {
        psi,
        theta,
        phi,
        common_phi,
        verified,
    }
}

/// `sin^2(Theta/2)` written through the rotated coordinates:
///
/// ```text
/// x_s = (z1^2 - z1 z2 + y1'^2 + s y1' sqrt(z1^2 - z2^2 + y1'^2)) / (2 (z1^2 + y1'^2))
/// ```
///
/// It equals `sin^2(Theta_{s1 s2}/2)` for the candidate with
/// `s2 = -s sgn(y1')`. Returns `None` when the discriminant is negative.
pub fn x_function(x1: SpherePoint, x2: SpherePoint, psi: f64, sigma2: Sign) -> Option<f64> {
    let r = rotated(x1, x2, psi);
    let disc = r.z1 * r.z1 - r.z2 * r.z2 + r.yp * r.yp;
    let norm = r.z1 * r.z1 + r.yp * r.yp;
    if disc < -ADMISSIBLE_SLACK || norm <= 0.0 {
        return None;
    }
    Some(
        (r.z1 * r.z1 - r.z1 * r.z2 + r.yp * r.yp + sigma2.f() * r.yp * disc.max(0.0).sqrt())
            / (2.0 * norm),
    )
}

/// The `y1'` coordinate for a gauge angle, exposed for callers pairing
/// [`x_function`] signs with [`partial_solutions`] candidates.
pub fn rotated_y(x1: SpherePoint, psi: f64) -> f64 {
    let [a, b, _] = x1.unit_vector();
    a * psi.sin() + b * psi.cos()
}
