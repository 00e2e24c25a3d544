//! The generalized spherical function `D^k_{qq'}(Phi, Theta, Psi)`.
//!
//! The explicit form is
//!
//! ```text
//! D^k_{qq'} = a(k,q,q') e^{i(q Phi + q' Psi)} sum_p b_p cos^{2k-2p+q-q'}(Theta/2) sin^{2p-q+q'}(Theta/2)
//! a(k,q,q') = i^{q'-q} sqrt((k+q)!(k-q)!(k+q')!(k-q')!)
//! b_p       = (-1)^p / (p! (p+q'-q)! (k+q-p)! (k-q'-p)!)
//! ```
//!
//! with `p` from `max(0, q-q')` to `min(k+q, k-q')`. Writing every summand with
//! sine and cosine powers keeps it finite at `Theta = pi` and valid for any real
//! `Theta`, so `D(Phi, Theta + 2 pi, Psi) = (-1)^{2k} D(Phi, Theta, Psi)` holds
//! without a separate reduction step.
//!
//! Rotations are active and follow the ZXZ convention
//! `R = R_z(Phi) R_x(Theta) R_z(Psi)`; see [`crate::geometry::rotation_matrix_zxz`].

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpherePoint;
use crate::halfint_algebra::{
    check_projection, factorial, factorial_ln_int, gauss_2f1_with_magnitude, i_pow, sign_pow, CNum,
    HalfInt,
};

/// Euler angles `(Phi, Theta, Psi)` in radians.
///
/// Values are stored as given. Geometry outputs keep `Theta` signed and may
/// exceed `[0, pi]`; the evaluators accept any real angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    /// Final rotation about z.
    pub phi: f64,
    /// Rotation about the intermediate x axis.
    pub theta: f64,
    /// First rotation about z.
    pub psi: f64,
}

impl EulerAngles {
    /// Builds the triple `(Phi, Theta, Psi)`.
    pub const fn new(phi: f64, theta: f64, psi: f64) -> Self {
        EulerAngles { phi, theta, psi }
    }
}

/// One matrix element `D^k_{qq'}` together with its indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DElement {
    /// Rank.
    pub k: HalfInt,
    /// Row projection.
    pub q: HalfInt,
    /// Column projection.
    pub qp: HalfInt,
    /// The value.
    pub value: CNum,
}

fn check_indices(k: HalfInt, q: HalfInt, qp: HalfInt) -> Result<()> {
    check_projection(k, q)?;
    check_projection(k, qp)
}

fn half(x: i32) -> i64 {
    i64::from(x) / 2
}

/// The prefactor `a(k,q,q') = i^{q'-q} sqrt((k+q)!(k-q)!(k+q')!(k-q')!)`.
pub fn a_coeff(k: HalfInt, q: HalfInt, qp: HalfInt) -> Result<CNum> {
    check_indices(k, q, qp)?;
    let (k2, q2, p2) = (k.twice, q.twice, qp.twice);
    let args = [half(k2 + q2), half(k2 - q2), half(k2 + p2), half(k2 - p2)];
    let magnitude = if k2 <= 80 {
        (factorial(args[0]) * factorial(args[1])).sqrt()
            * (factorial(args[2]) * factorial(args[3])).sqrt()
    } else {
        (0.5 * args.iter().map(|&n| factorial_ln_int(n)).sum::<f64>()).exp()
    };
    Ok(i_pow(qp - q) * magnitude)
}

/// The summand coefficient `b_p(k,q,q')`; zero when any factorial argument is negative.
pub fn b_coeff(k: HalfInt, q: HalfInt, qp: HalfInt, p: i64) -> f64 {
    let (k2, q2, p2) = (k.twice, q.twice, qp.twice);
    if (k2 - q2) % 2 != 0 || (k2 - p2) % 2 != 0 {
        return 0.0;
    }
    let args = [p, p + half(p2 - q2), half(k2 + q2) - p, half(k2 - p2) - p];
    if args.iter().any(|&n| n < 0) {
        return 0.0;
    }
    let den = if k2 <= 80 {
        args.iter().map(|&n| factorial(n)).product::<f64>()
    } else {
        args.iter().map(|&n| factorial_ln_int(n)).sum::<f64>().exp()
    };
    sign_pow(p) / den
}

/// Range of the summation index `p`: `max(0, q-q') ..= min(k+q, k-q')`.
pub fn p_range(k: HalfInt, q: HalfInt, qp: HalfInt) -> std::ops::RangeInclusive<i64> {
    let lo = 0.max(half(q.twice - qp.twice));
    let hi = half(k.twice + q.twice).min(half(k.twice - qp.twice));
    lo..=hi
}

/// `sqrt((k+q)!(k-q)!(k+q')!(k-q')!) b_p`, computed in one pass to limit overflow.
pub(crate) fn ab_coeff(k: HalfInt, q: HalfInt, qp: HalfInt, p: i64) -> f64 {
    let (k2, q2, p2) = (k.twice, q.twice, qp.twice);
    let den = [p, p + half(p2 - q2), half(k2 + q2) - p, half(k2 - p2) - p];
    if den.iter().any(|&n| n < 0) {
        return 0.0;
    }
    let num = [half(k2 + q2), half(k2 - q2), half(k2 + p2), half(k2 - p2)];
    let value = if k2 <= 80 {
        let mut v = (factorial(num[0]) * factorial(num[1])).sqrt()
            * (factorial(num[2]) * factorial(num[3])).sqrt();
        for n in den {
            v /= factorial(n);
        }
        v
    } else {
        let l = 0.5 * num.iter().map(|&n| factorial_ln_int(n)).sum::<f64>()
            - den.iter().map(|&n| factorial_ln_int(n)).sum::<f64>();
        l.exp()
    };
    sign_pow(p) * value
}

/// Largest tolerated estimate of the absolute rounding error of a `D` value.
///
/// `|D| <= 1`, so the error of an alternating sum is about `eps` times the sum
/// of the absolute values of its terms. Large ranks near `Theta = pi/2` exceed
/// the limit and are reported as numeric errors instead of returned.
pub const D_ERROR_LIMIT: f64 = 1e-8;

fn guard_cancellation(k: HalfInt, value: f64, magnitude: f64, terms: usize) -> Result<f64> {
    let estimate = magnitude * f64::EPSILON * (terms as f64 + 1.0);
    if estimate.is_finite() && estimate <= D_ERROR_LIMIT && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::numeric(
            format!(
                "rank {k}: cancellation in the sum leaves an estimated absolute error {estimate:.1e} \
                 above {D_ERROR_LIMIT:.0e}"
            ),
            vec![value, estimate],
        ))
    }
}

/// The real `Theta`-dependent sum `sum_p |a| b_p cos^{..}(x) sin^{..}(x)` at half-angle `x`.
///
/// Multiplying by `i^{q'-q} e^{i(q Phi + q' Psi)}` gives `D^k_{qq'}`. Fails when
/// cancellation between the terms exceeds [`D_ERROR_LIMIT`].
pub(crate) fn half_angle_sum(k: HalfInt, q: HalfInt, qp: HalfInt, x: f64) -> Result<f64> {
    let (c, s) = (x.cos(), x.sin());
    let (mut sum, mut magnitude) = (0.0, 0.0);
    let range = p_range(k, q, qp);
    let terms = range.clone().count();
    for p in range {
        let cos_power = half(2 * k.twice + q.twice - qp.twice) - 2 * p;
        let sin_power = 2 * p + half(qp.twice - q.twice);
        let term = ab_coeff(k, q, qp, p) * c.powi(cos_power as i32) * s.powi(sin_power as i32);
        sum += term;
        magnitude += term.abs();
    }
    guard_cancellation(k, sum, magnitude, terms)
}

/// `D^k_{qq'}(Omega)` by the explicit finite sum.
pub fn wigner_d(k: HalfInt, q: HalfInt, qp: HalfInt, omega: EulerAngles) -> Result<CNum> {
    check_indices(k, q, qp)?;
    let sum = half_angle_sum(k, q, qp, omega.theta / 2.0)?;
    let phase = CNum::from_polar(1.0, q.value() * omega.phi + qp.value() * omega.psi);
    Ok(i_pow(qp - q) * phase * sum)
}

/// The full matrix `D^k(Omega)`, rows indexed by `q` and columns by `q'` in ascending order.
pub fn wigner_d_matrix(k: HalfInt, omega: EulerAngles) -> Result<Vec<Vec<CNum>>> {
    k.projections()
        .map(|q| {
            k.projections()
                .map(|qp| wigner_d(k, q, qp, omega))
                .collect()
        })
        .collect()
}

/// `D^k_{qq'}(Omega)` through one Gauss hypergeometric function.
///
/// For `q >= q'` the `Theta` dependence is
///
/// ```text
/// i^{q-q'} / (q-q')! sqrt((k+q)!(k-q')! / ((k+q')!(k-q)!))
///   tan^{q-q'}(Theta/2) cos^{-2-2k}(Theta/2) 2F1(k+1+q, k+1-q'; 1+q-q'; -tan^2(Theta/2))
/// ```
///
/// and for `q < q'` the roles of `q` and `q'` in that factor are exchanged. The
/// angle is first brought into `[0, pi]` with the `2 pi` shift and the
/// `Theta -> -Theta` reflection.
pub fn wigner_d_hyp(k: HalfInt, q: HalfInt, qp: HalfInt, omega: EulerAngles) -> Result<CNum> {
    check_indices(k, q, qp)?;
    let mut theta = omega.theta;
    let mut sign = 1.0;
    let turns = ((theta + PI) / (2.0 * PI)).floor();
    if turns != 0.0 {
        theta -= 2.0 * PI * turns;
        if !k.is_integer() && (turns as i64) % 2 != 0 {
            sign = -sign;
        }
    }
    if theta < 0.0 {
        theta = -theta;
        sign *= sign_pow(half(qp.twice - q.twice));
    }
    let phase = CNum::from_polar(sign, q.value() * omega.phi + qp.value() * omega.psi);
    let value = if theta > FRAC_PI_2 {
        let mirror = i_pow(HalfInt::from_twice(2 * (k.twice + q.twice + qp.twice)));
        phase * hyp_reduced(k, q, -qp, PI - theta)? * mirror
    } else {
        phase * hyp_reduced(k, q, qp, theta)?
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::numeric(
            "hypergeometric D evaluation overflowed",
            vec![value.re, value.im],
        ))
    }
}

/// `D^k_{qq'}(0, theta, 0)` through one `2F1` call, for `theta` in `[0, pi/2]`.
///
/// The `2F1` argument maps to `sin^2(theta/2) <= 1/2`, where the terminating
/// series has no severe cancellation. Larger angles use the reflection
/// `D^k_{qq'}(0, theta, 0) = i^{2(k+q+q')} D^k_{q,-q'}(0, pi - theta, 0)`.
fn hyp_reduced(k: HalfInt, q: HalfInt, qp: HalfInt, theta: f64) -> Result<CNum> {
    let (big, small) = if q.twice >= qp.twice {
        (q, qp)
    } else {
        (qp, q)
    };
    let diff = half(big.twice - small.twice);
    let (k2, b2, s2) = (k.twice, big.twice, small.twice);
    let ratio = if k2 <= 80 {
        (factorial(half(k2 + b2)) * factorial(half(k2 - s2))
            / (factorial(half(k2 + s2)) * factorial(half(k2 - b2))))
        .sqrt()
    } else {
        (0.5 * (factorial_ln_int(half(k2 + b2)) + factorial_ln_int(half(k2 - s2))
            - factorial_ln_int(half(k2 + s2))
            - factorial_ln_int(half(k2 - b2))))
        .exp()
    };
    let t = (theta / 2.0).tan();
    let c = (theta / 2.0).cos();
    let kv = k.value();
    let (f, magnitude) = gauss_2f1_with_magnitude(
        kv + 1.0 + big.value(),
        kv + 1.0 - small.value(),
        1.0 + diff as f64,
        -t * t,
    )?;
    let prefactor = ratio / factorial(diff) * t.powi(diff as i32) * c.powf(-2.0 - 2.0 * kv);
    let amplitude = guard_cancellation(
        k,
        prefactor * f,
        prefactor.abs() * magnitude,
        k.multiplicity(),
    )?;
    Ok(i_pow(big - small) * amplitude)
}

/// Normalized spherical harmonic `C^k_q(x) = i^k D^k_{q0}(phi + pi/2, theta, 0)`.
///
/// This is `i^k sqrt(4 pi / (2k+1)) Y^k_q` with the Condon-Shortley `Y`, so
/// `C^k_0(0, 0) = i^k`.
pub fn c_harmonic(k: HalfInt, q: HalfInt, x: SpherePoint) -> Result<CNum> {
    if !k.is_integer() {
        return Err(Error::domain(format!(
            "spherical harmonic of non-integer rank {k}"
        )));
    }
    let d = wigner_d(
        k,
        q,
        HalfInt::ZERO,
        EulerAngles::new(x.phi + PI / 2.0, x.theta, 0.0),
    )?;
    Ok(i_pow(k) * d)
}

/// Spherical harmonic `Y^k_q(x) = sqrt((2k+1)/(4 pi)) C^k_q(x)` in the same phase system.
pub fn y_harmonic(k: HalfInt, q: HalfInt, x: SpherePoint) -> Result<CNum> {
    let norm = ((f64::from(k.twice) + 1.0) / (4.0 * PI)).sqrt();
    Ok(c_harmonic(k, q, x)? * norm)
}

/// All components `C^k_q(x)`, `q = -k..k`.
pub fn c_harmonic_vector(k: HalfInt, x: SpherePoint) -> Result<Vec<CNum>> {
    k.projections().map(|q| c_harmonic(k, q, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn a_coeff_examples() {
        let z = HalfInt::ZERO;
        assert_eq!(a_coeff(z, z, z).unwrap(), CNum::new(1.0, 0.0));
        let v = a_coeff(h(2), h(2), z).unwrap();
        assert!((v - CNum::new(0.0, -2f64.sqrt())).norm() < 1e-15);
        let v = a_coeff(h(5), h(-1), h(3)).unwrap();
        assert!((v - CNum::new(-288f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn b_coeff_examples() {
        let z = HalfInt::ZERO;
        assert_eq!(b_coeff(z, z, z, 0), 1.0);
        assert_eq!(b_coeff(h(2), z, z, 0), 1.0);
        assert_eq!(b_coeff(h(2), z, z, 1), -1.0);
        assert_eq!(b_coeff(h(2), z, z, 2), 0.0);
        assert_eq!(b_coeff(h(2), z, z, -1), 0.0);
    }

    #[test]
    fn worked_examples() {
        let e1 = CNum::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0);
        let e2 = CNum::from_polar(0.25, 5.0 * PI / 8.0);
        let d1 = wigner_d(
            h(5),
            h(-1),
            h(3),
            EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI),
        );
        let d2 = wigner_d(
            h(5),
            h(-1),
            h(3),
            EulerAngles::new(1.5 * PI, PI / 2.0, PI / 4.0),
        );
        assert!((d1.unwrap() - e1).norm() < 1e-14);
        assert!((d2.unwrap() - e2).norm() < 1e-14);
        let h1 = wigner_d_hyp(
            h(5),
            h(-1),
            h(3),
            EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI),
        );
        assert!((h1.unwrap() - e1).norm() < 1e-13);
    }

    #[test]
    fn identity_rotation_is_the_identity_matrix() {
        for k2 in 0..8 {
            let k = h(k2);
            for q in k.projections() {
                for qp in k.projections() {
                    let d = wigner_d(k, q, qp, EulerAngles::new(0.0, 0.0, 0.0)).unwrap();
                    let expect = if q == qp { 1.0 } else { 0.0 };
                    assert!((d - expect).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn hypergeometric_special_values() {
        let z = HalfInt::ZERO;
        let p3 = wigner_d_hyp(HalfInt::int(3), z, z, EulerAngles::new(0.0, PI / 2.0, 0.0)).unwrap();
        assert!(p3.norm() < 1e-12);
        for theta in [0.0, 0.4, 1.7, PI, 4.0, -2.2] {
            let v = wigner_d_hyp(h(1), h(1), h(1), EulerAngles::new(0.0, theta, 0.0)).unwrap();
            assert!((v - (theta / 2.0).cos()).norm() < 1e-14, "theta={theta}");
        }
    }

    #[test]
    fn harmonics_match_known_forms() {
        let x = SpherePoint::new(0.7, 1.9).unwrap();
        let one = HalfInt::int(1);
        let c10 = c_harmonic(one, HalfInt::ZERO, x).unwrap();
        assert!((c10 - CNum::new(0.0, 0.7f64.cos())).norm() < 1e-15);
        let y11 = y_harmonic(one, one, x).unwrap();
        let cs = -(3.0 / (8.0 * PI)).sqrt() * 0.7f64.sin() * CNum::from_polar(1.0, 1.9);
        assert!((y11 - CNum::i() * cs).norm() < 1e-15);
        assert!(c_harmonic(h(1), h(1), x).is_err());
    }
}
