//! Spherical functions parametrized by a coordinate pair.
//!
//! Substituting a branch tuple of [`crate::geometry`] into `D^k_{qq'}` gives
//!
//! ```text
//! (n, n'; alpha, beta, gamma, delta | x1, x2)^k_{qq'}
//!   = i^{alpha q + delta q'} (-1)^{2(n k + n' q')} beta^{q'-q} a(k,q,q') e^{i(q phi2 - q' phi1)}
//!     sum_p b_p cos^{2k-2p+q-q'}(u) sin^{2p+q'-q}(u),      u = (theta1 - gamma theta2) / 2
//! ```
//!
//! A nonzero `phi_winding` `w` on the tuple contributes a further `(-1)^{2qw}`.
//!
//! The named families are
//!
//! | family | tuple |
//! |---|---|
//! | `xi_p`, `xi_m` | `(0, n'; +, +/-, +, -)` |
//! | `theta_p`, `theta_m` | `(0, n'; -, +/-, +, +)` |
//! | `zeta_p` | `(0, n'; +, +, -, +)` |
//! | `zeta_m` | `(1, n'; -, -, -, -)` |
//!
//! [`sphfun_named`] picks `n'` and the `Phi` winding that bring `Psi` and `Phi`
//! into `[0, 2 pi)`, so every named value equals `D^k_{qq'}` at the reduced
//! Euler angles of the same tuple. `eta` is the function of the `Omega_1` rows of
//! the geometry table: `xi_m` for `phi2` in `[0, pi]` and `theta_p` otherwise.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BranchLabel, BranchSpec, Sign, SpherePoint};
use crate::halfint_algebra::{
    cgc_unchecked, check_projection, i_pow, sign_pow, CNum, HalfInt, Triangle,
};
use crate::wigner::half_angle_sum;

/// A branch tuple together with the indices `k, q, q'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphFunSpec {
    /// Parameter tuple, windings included.
    pub branch: BranchSpec,
    /// Rank.
    pub k: HalfInt,
    /// Row projection.
    pub q: HalfInt,
    /// Column projection.
    pub qp: HalfInt,
}

impl SphFunSpec {
    /// Checks that `q` and `q'` are projections of `k`.
    pub fn new(branch: BranchSpec, k: HalfInt, q: HalfInt, qp: HalfInt) -> Result<Self> {
        check_projection(k, q)?;
        check_projection(k, qp)?;
        Ok(SphFunSpec { branch, k, q, qp })
    }
}

fn signed(s: Sign, x: HalfInt) -> HalfInt {
    match s {
        Sign::Plus => x,
        Sign::Minus => -x,
    }
}

/// Evaluates the spherical function of an arbitrary tuple.
pub fn sphfun_general(spec: &SphFunSpec, x1: SpherePoint, x2: SpherePoint) -> Result<CNum> {
    let SphFunSpec {
        branch: b,
        k,
        q,
        qp,
    } = *spec;
    check_projection(k, q)?;
    check_projection(k, qp)?;
    let phase_exp = signed(b.alpha, q) + signed(b.delta, qp);
    let windings = i64::from(b.n) * i64::from(k.twice)
        + i64::from(b.n_prime) * i64::from(qp.twice)
        + i64::from(b.phi_winding) * i64::from(q.twice);
    let beta_sign = match b.beta {
        Sign::Plus => 1.0,
        Sign::Minus => sign_pow(i64::from((qp.twice - q.twice) / 2)),
    };
    let u = 0.5 * (x1.theta - b.gamma.f() * x2.theta);
    let sum = half_angle_sum(k, q, qp, u)?;
    let azimuth = CNum::from_polar(1.0, q.value() * x2.phi - qp.value() * x1.phi);
    Ok(i_pow(phase_exp) * i_pow(qp - q) * azimuth * (sign_pow(windings) * beta_sign * sum))
}

/// The named families, plus `eta` for the geometrically valid `Omega_1` function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `+xi`.
    XiP,
    /// `-xi`.
    XiM,
    /// `+theta` (the vartheta family).
    ThetaP,
    /// `-theta`.
    ThetaM,
    /// `+zeta`, the `Omega_2^+` function.
    ZetaP,
    /// `-zeta`, the `Omega_2^-` function.
    ZetaM,
    /// The `Omega_1` function selected by the `phi2` range.
    Eta,
}

impl Family {
    /// All families in a fixed order.
    pub const ALL: [Family; 7] = [
        Family::XiP,
        Family::XiM,
        Family::ThetaP,
        Family::ThetaM,
        Family::ZetaP,
        Family::ZetaM,
        Family::Eta,
    ];

    /// The tuple with zero `n'` and zero `Phi` winding.
    ///
    /// `Eta` resolves to `XiM` or `ThetaP` through [`Family::resolve`] first.
    pub fn tuple(self, x2: SpherePoint) -> BranchSpec {
        use Sign::{Minus as M, Plus as P};
        let (label, n, t) = match self.resolve(x2) {
            Family::XiP => (BranchLabel::O11p, 0, [P, P, P, M]),
            Family::XiM => (BranchLabel::O11m, 0, [P, M, P, M]),
            Family::ThetaP => (BranchLabel::O12p, 0, [M, P, P, P]),
            Family::ThetaM => (BranchLabel::O12m, 0, [M, M, P, P]),
            Family::ZetaP => (BranchLabel::O2p, 0, [P, P, M, P]),
            Family::ZetaM | Family::Eta => (BranchLabel::O2m, 1, [M, M, M, M]),
        };
        BranchSpec::custom(label, n, 0, t[0], t[1], t[2], t[3])
    }

    /// Replaces `Eta` by the family it denotes at `x2`; other families are returned unchanged.
    pub fn resolve(self, x2: SpherePoint) -> Family {
        match self {
            Family::Eta if x2.phi <= PI => Family::XiM,
            Family::Eta => Family::ThetaP,
            other => other,
        }
    }

    /// The canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            Family::XiP => "xi_p",
            Family::XiM => "xi_m",
            Family::ThetaP => "theta_p",
            Family::ThetaM => "theta_m",
            Family::ZetaP => "zeta_p",
            Family::ZetaM => "zeta_m",
            Family::Eta => "eta",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == t)
            .ok_or_else(|| Error::domain(format!("unknown family {s:?}")))
    }
}

/// The tuple a family uses at `(x1, x2)`, with the windings that reduce `Phi` and `Psi` into `[0, 2 pi)`.
pub fn family_branch(family: Family, x1: SpherePoint, x2: SpherePoint) -> BranchSpec {
    family.tuple(x2).with_reducing_windings(x1, x2)
}

/// Evaluates a named family at `(x1, x2)`.
///
/// `xi_m` and `theta_m` are derived from `xi_p` and `theta_p` by the factor
/// `(-1)^{q'-q}`; the two members of each pair share their windings, so the
/// factor is exact.
pub fn sphfun_named(
    family: Family,
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    let mirror = sign_pow(i64::from((qp.twice - q.twice) / 2));
    let eval = |f: Family| {
        let spec = SphFunSpec::new(family_branch(f, x1, x2), k, q, qp)?;
        sphfun_general(&spec, x1, x2)
    };
    match family.resolve(x2) {
        Family::XiM => Ok(eval(Family::XiP)? * mirror),
        Family::ThetaM => Ok(eval(Family::ThetaP)? * mirror),
        other => eval(other),
    }
}

/// `eta^k_{qq'}(x1, x2)`, the `Omega_1` spherical function.
pub fn eta(k: HalfInt, q: HalfInt, qp: HalfInt, x1: SpherePoint, x2: SpherePoint) -> Result<CNum> {
    sphfun_named(Family::Eta, k, q, qp, x1, x2)
}

/// `eta` evaluated through the `Omega_1^+` row of the geometry table for the `phi2` range.
pub fn eta_plus(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    omega1_row(k, q, qp, x1, x2, [BranchLabel::O11p, BranchLabel::O12p])
}

/// `eta` evaluated through the `Omega_1^-` row of the geometry table for the `phi2` range.
pub fn eta_minus(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    omega1_row(k, q, qp, x1, x2, [BranchLabel::O11m, BranchLabel::O12m])
}

fn omega1_row(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
    labels: [BranchLabel; 2],
) -> Result<CNum> {
    let label = if x2.phi <= PI { labels[0] } else { labels[1] };
    let branch = BranchSpec::table(label).with_reducing_windings(x1, x2);
    sphfun_general(&SphFunSpec::new(branch, k, q, qp)?, x1, x2)
}

/// The full matrix of a family, rows `q` and columns `q'` ascending.
pub fn family_matrix(
    family: Family,
    k: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<Vec<Vec<CNum>>> {
    k.projections()
        .map(|q| {
            k.projections()
                .map(|qp| sphfun_named(family, k, q, qp, x1, x2))
                .collect()
        })
        .collect()
}

/// The per-rank terms of the product reduction
///
/// ```text
/// tau^{k1}_{q1 q1'} tau^{k2}_{q2 q2'} = sum_k tau^k_{q1+q2, q1'+q2'} <k1 q1 k2 q2|k q> <k1 q1' k2 q2'|k q'>
/// ```
///
/// Keys are the ranks `k` allowed by the triangle rule; the values add up to the product.
#[allow(clippy::too_many_arguments)]
pub fn sphfun_reduce(
    family: Family,
    k1: HalfInt,
    q1: HalfInt,
    q1p: HalfInt,
    k2: HalfInt,
    q2: HalfInt,
    q2p: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<BTreeMap<HalfInt, CNum>> {
    check_projection(k1, q1)?;
    check_projection(k1, q1p)?;
    check_projection(k2, q2)?;
    check_projection(k2, q2p)?;
    let (q, qp) = (q1 + q2, q1p + q2p);
    let mut terms = BTreeMap::new();
    for k in Triangle::coupled_ranks(k1, k2) {
        if q.twice.abs() > k.twice || qp.twice.abs() > k.twice {
            continue;
        }
        let c = cgc_unchecked(k1, q1, k2, q2, k, q) * cgc_unchecked(k1, q1p, k2, q2p, k, qp);
        terms.insert(k, sphfun_named(family, k, q, qp, x1, x2)? * c);
    }
    Ok(terms)
}

/// Transforms tensor components from `K1` to `K2`: `T_q(K2) = sum_{q'} tau^k_{qq'}(x1, x2) T_{q'}(K1)`.
pub fn transform_tensor(
    family: Family,
    k: HalfInt,
    components: &[CNum],
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<Vec<CNum>> {
    if components.len() != k.multiplicity() {
        return Err(Error::domain(format!(
            "rank {k} needs {} components, got {}",
            k.multiplicity(),
            components.len()
        )));
    }
    let m = family_matrix(family, k, x1, x2)?;
    Ok(m.iter()
        .map(|row| row.iter().zip(components).map(|(a, b)| a * b).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euler_from_points;
    use crate::wigner::wigner_d;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn pt(t: f64, p: f64) -> SpherePoint {
        SpherePoint::new(t, p).unwrap()
    }

    #[test]
    fn worked_examples() {
        let (x1, x2) = (pt(PI / 6.0, PI / 4.0), pt(PI / 3.0, PI));
        let e1 = CNum::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0);
        let e2 = CNum::from_polar(0.25, 5.0 * PI / 8.0);
        let v = sphfun_named(Family::XiM, h(5), h(-1), h(3), x1, x2).unwrap();
        assert!((v - e1).norm() < 1e-14);
        let v = sphfun_named(Family::ZetaP, h(5), h(-1), h(3), x1, x2).unwrap();
        assert!((v - e2).norm() < 1e-14);
        let mut b = Family::XiM.tuple(x2);
        b.n_prime = 1;
        let v = sphfun_general(&SphFunSpec::new(b, h(5), h(-1), h(3)).unwrap(), x1, x2).unwrap();
        assert!((v - e1).norm() < 1e-14);
    }

    #[test]
    fn scalar_rank_is_one() {
        let (x1, x2) = (pt(0.3, 5.0), pt(2.9, 1.0));
        for f in Family::ALL {
            let v = sphfun_named(f, HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO, x1, x2).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn branches_agree_with_d() {
        let (x1, x2) = (pt(1.2, 5.5), pt(0.4, 4.0));
        for sol in euler_from_points(x1, x2).unwrap() {
            for k2 in 0..5 {
                let k = h(k2);
                for q in k.projections() {
                    for qp in k.projections() {
                        let s =
                            sphfun_general(&SphFunSpec::new(sol.branch, k, q, qp).unwrap(), x1, x2);
                        let d = wigner_d(k, q, qp, sol.omega).unwrap();
                        assert!((s.unwrap() - d).norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn transform_rejects_wrong_length() {
        let x = pt(1.0, 1.0);
        assert!(transform_tensor(Family::Eta, h(2), &[CNum::new(1.0, 0.0)], x, x).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}
