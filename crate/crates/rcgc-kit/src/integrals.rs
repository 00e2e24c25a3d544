//! Sphere integrals of the coordinate-parametrized spherical functions.
//!
//! The `theta2` integrals reduce to the kernel
//!
//! ```text
//! pI^k_{qq'}(theta1; gamma; a, b) = int_a^b sin(t) cos^{2k-m}(u) sin^m(u) dt,
//!     u = (theta1 - gamma t) / 2,   m = 2p + q' - q
//! ```
//!
//! which, after `z = tan u`, becomes `2 {2 cos(theta1) I_1 + sin(theta1) (I_2 - I_0)}` with
//!
//! ```text
//! I_s(z) = int_0^z t^n / (1 + t^2)^{k+2} dt = z^{n+1}/(n+1) 2F1((n+1)/2, k+2; (n+3)/2; -z^2),
//!     n = m + s.
//! ```
//!
//! For `|z| > 1` the antiderivative is taken as the Beta limit minus the tail
//! `int_{|z|}^inf`, which is again of the same form in `1/|z|`, so the
//! hypergeometric argument always stays in `[-1, 0]`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Sign, SpherePoint};
use crate::halfint_algebra::{
    beta, check_projection, gauss_2f1, i_pow, minus_one_pow, sign_pow, CNum, HalfInt,
};
use crate::wigner::{ab_coeff, p_range};

/// Arguments of one `pI` kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PIKernel {
    /// Rank.
    pub k: HalfInt,
    /// Row projection.
    pub q: HalfInt,
    /// Column projection.
    pub qp: HalfInt,
    /// Summation index `p`.
    pub p: i64,
    /// Polar angle of the fixed point.
    pub theta1: f64,
    /// Lower limit.
    pub a: f64,
    /// Upper limit.
    pub b: f64,
    /// Sign of `theta2` inside the half angle.
    pub gamma: Sign,
}

impl PIKernel {
    /// The power `m = 2p + q' - q` of the sine factor.
    pub fn m(&self) -> i64 {
        2 * self.p + i64::from((self.qp.twice - self.q.twice) / 2)
    }

    fn validate(&self) -> Result<()> {
        check_projection(self.k, self.q)?;
        check_projection(self.k, self.qp)?;
        let m = self.m();
        if m < 0 || m > i64::from(self.k.twice) {
            return Err(Error::domain(format!(
                "summation index p = {} outside the range for k = {}, q = {}, q' = {}",
                self.p, self.k, self.q, self.qp
            )));
        }
        if self.a.is_nan() || self.b.is_nan() || self.a > self.b || self.a < 0.0 || self.b > PI {
            return Err(Error::domain(format!(
                "limits ({}, {}) must satisfy 0 <= a <= b <= pi",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// `int_0^z t^n / (1 + t^2)^{k+2} dt` for `0 <= z <= 1`.
fn power_antiderivative(n: i64, k: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    let e = (n + 1) as f64;
    Ok(z.powi((n + 1) as i32) / e * gauss_2f1(e / 2.0, k + 2.0, e / 2.0 + 1.0, -z * z)?)
}

/// `int_0^inf t^n / (1 + t^2)^{k+2} dt = B((n+1)/2, k + 2 - (n+1)/2) / 2`.
fn power_limit(n: i64, k: f64) -> Result<f64> {
    let x = (n + 1) as f64 / 2.0;
    let y = k + 2.0 - x;
    if x <= 0.0 || y <= 0.0 {
        return Err(Error::Divergent(format!(
            "int_0^inf t^{n} (1+t^2)^-(k+2) diverges for k = {k}"
        )));
    }
    Ok(0.5 * beta(x, y)?)
}

/// The antiderivative `I_s(z) = int_0^z t^{2p+q'-q+s} / (1 + t^2)^{k+2} dt`.
///
/// `z` may be `+-inf`, giving the Beta limits.
pub fn i_s_antiderivative(
    s: u8,
    p: i64,
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    z: f64,
) -> Result<f64> {
    check_projection(k, q)?;
    check_projection(k, qp)?;
    if s > 2 {
        return Err(Error::domain(format!("s = {s} must be 0, 1 or 2")));
    }
    if z.is_nan() {
        return Err(Error::domain("antiderivative at NaN"));
    }
    let n = 2 * p + i64::from((qp.twice - q.twice) / 2) + i64::from(s);
    if n < 0 {
        return Err(Error::domain(format!(
            "exponent n = {n} gives a logarithmic or singular antiderivative"
        )));
    }
    let kv = k.value();
    let odd_sign = if z < 0.0 { sign_pow(n + 1) } else { 1.0 };
    let y = z.abs();
    let magnitude = if y <= 1.0 {
        power_antiderivative(n, kv, y)?
    } else {
        let limit = power_limit(n, kv)?;
        if y.is_infinite() {
            limit
        } else {
            // int_y^inf t^n (1+t^2)^-(k+2) dt = int_0^{1/y} u^{2k+2-n} (1+u^2)^-(k+2) du
            let tail_n = i64::from(k.twice) + 2 - n;
            if tail_n < 0 {
                return Err(Error::Divergent(format!(
                    "tail integral with exponent {tail_n}"
                )));
            }
            limit - power_antiderivative(tail_n, kv, 1.0 / y)?
        }
    };
    Ok(odd_sign * magnitude)
}

/// `tan((theta1 - t)/2)` with the two exact poles mapped to infinities.
fn endpoint(theta1: f64, t: f64) -> f64 {
    let d = theta1 - t;
    if (d.abs() - PI).abs() < 1e-14 {
        if d < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        (0.5 * d).tan()
    }
}

fn p_i_plus(kernel: &PIKernel, theta1: f64) -> Result<f64> {
    let PIKernel {
        k, q, qp, p, a, b, ..
    } = *kernel;
    let (za, zb) = (endpoint(theta1, a), endpoint(theta1, b));
    let mut diff = [0.0; 3];
    for s in 0..3u8 {
        diff[s as usize] =
            i_s_antiderivative(s, p, k, q, qp, zb)? - i_s_antiderivative(s, p, k, q, qp, za)?;
    }
    Ok(2.0 * (2.0 * theta1.cos() * diff[1] + theta1.sin() * (diff[2] - diff[0])))
}

/// The kernel `pI^k_{qq'}(theta1; gamma; a, b)` in closed form.
///
/// For `gamma = -1` only `theta1` in `{0, pi}` is supported, where the
/// integrand is a signed copy of the `gamma = +1` one:
/// `pI(0; -) = (-1)^m pI(0; +)` and `pI(pi; -) = (-1)^{2k-m} pI(pi; +)`. Any other
/// `theta1` is a domain error, because the `Omega_2` functions are not
/// integrable over the sphere in general.
pub fn p_i(kernel: &PIKernel) -> Result<f64> {
    kernel.validate()?;
    match kernel.gamma {
        Sign::Plus => p_i_plus(kernel, kernel.theta1),
        Sign::Minus => {
            let m = kernel.m();
            if kernel.theta1 == 0.0 {
                Ok(sign_pow(m) * p_i_plus(kernel, 0.0)?)
            } else if kernel.theta1 == PI {
                Ok(sign_pow(i64::from(kernel.k.twice) - m) * p_i_plus(kernel, PI)?)
            } else {
                Err(Error::domain(
                    "gamma = -1 kernels have closed forms only at theta1 = 0 or pi",
                ))
            }
        }
    }
}

/// `lambda_{q'}(phi1)`: `e^{i pi q'}` on `[0, pi/2]`, `e^{2 i pi q'}` on `(pi/2, 3pi/2]`, `e^{3 i pi q'}` beyond.
pub fn lambda_qp(qp: HalfInt, phi1: f64) -> CNum {
    let turns = if phi1 <= FRAC_PI_2 {
        1
    } else if phi1 <= 3.0 * FRAC_PI_2 {
        2
    } else {
        3
    };
    minus_one_pow(HalfInt::from_twice(turns * qp.twice))
}

fn kernel_sum(
    k: HalfInt,
    q: HalfInt,
    qp: HalfInt,
    theta1: f64,
    pieces: &[(f64, f64, f64)],
) -> Result<f64> {
    let mut total = 0.0;
    for p in p_range(k, q, qp) {
        let ab = ab_coeff(k, q, qp, p);
        if ab == 0.0 {
            continue;
        }
        for &(a, b, weight) in pieces {
            if b > a {
                let kernel = PIKernel {
                    k,
                    q,
                    qp,
                    p,
                    theta1,
                    a,
                    b,
                    gamma: Sign::Plus,
                };
                total += weight * ab * p_i(&kernel)?;
            }
        }
    }
    Ok(total)
}

/// The closed-form sphere integral `S^k_{qq'}(x1; +)` of the `Omega_1` functions.
///
/// ```text
/// S = lambda_{q'}(phi1) i^{q-q'-1} ((-1)^q - 1)/q ((-1)^{q'} + 1) a(k,q,q') e^{-i q' phi1}
///     sum_p b_p [pI(theta1; +; 0, theta1) + (-1)^{q-q'} pI(theta1; +; theta1, pi)]
/// ```
///
/// At `q = 0` the factor `i^{q-q'-1} ((-1)^q - 1)/q` takes its limit `pi i^{-q'}`.
/// No selection rule is applied: for integer `k` and odd `q` the value is in
/// general nonzero and agrees with direct quadrature.
pub fn s_integral(k: HalfInt, q: HalfInt, qp: HalfInt, x1: SpherePoint) -> Result<CNum> {
    check_projection(k, q)?;
    check_projection(k, qp)?;
    let theta1 = x1.theta;
    let mirror = sign_pow(i64::from((q.twice - qp.twice) / 2));
    let sum = kernel_sum(
        k,
        q,
        qp,
        theta1,
        &[(0.0, theta1, 1.0), (theta1, PI, mirror)],
    )?;
    let q_factor = if q.twice == 0 {
        i_pow(-qp) * PI
    } else {
        i_pow(q - qp - HalfInt::int(1)) * (minus_one_pow(q) - 1.0) / q.value()
    };
    let value = lambda_qp(qp, x1.phi)
        * q_factor
        * (minus_one_pow(qp) + 1.0)
        * i_pow(qp - q)
        * CNum::from_polar(1.0, -qp.value() * x1.phi)
        * sum;
    Ok(value)
}

/// [`s_integral`] together with its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SResult {
    /// Rank.
    pub k: HalfInt,
    /// Row projection.
    pub q: HalfInt,
    /// Column projection.
    pub qp: HalfInt,
    /// Polar angle of `x1`.
    pub theta1: f64,
    /// Azimuth of `x1`.
    pub phi1: f64,
    /// The integral.
    pub value: CNum,
}

impl SResult {
    /// Evaluates [`s_integral`] and records the arguments.
    pub fn compute(k: HalfInt, q: HalfInt, qp: HalfInt, x1: SpherePoint) -> Result<Self> {
        Ok(SResult {
            k,
            q,
            qp,
            theta1: x1.theta,
            phi1: x1.phi,
            value: s_integral(k, q, qp, x1)?,
        })
    }
}

/// `int_{S^2} eta^k_{qq'}(x1, x2) dx2` for integer `k`.
///
/// Only `q = 0` survives the `phi2` integration:
///
/// ```text
/// 2 pi delta_{q0} (-1)^{q'} |a(k,0,q')| e^{-i q' phi1} sum_p b_p pI(theta1; +; 0, pi)
/// ```
///
/// This is the integral the matrix-element reductions need. It coincides with
/// [`s_integral`] when `q = 0` and `q'` is even.
pub fn eta_sphere_integral(k: HalfInt, q: HalfInt, qp: HalfInt, x1: SpherePoint) -> Result<CNum> {
    check_projection(k, q)?;
    check_projection(k, qp)?;
    if !k.is_integer() {
        return Err(Error::domain(format!(
            "the sphere integral of eta is single-valued only for integer rank, got {k}"
        )));
    }
    if q.twice != 0 {
        return Ok(CNum::new(0.0, 0.0));
    }
    let sum = kernel_sum(k, q, qp, x1.theta, &[(0.0, PI, 1.0)])?;
    let sign = sign_pow(i64::from(qp.twice / 2));
    Ok(CNum::from_polar(
        2.0 * PI * sign * sum,
        -qp.value() * x1.phi,
    ))
}

/// `int_0^pi sin^{2k+1}(t) cos^g(t) dt = [1 + (-1)^g] B(k+1, (g+1)/2) / 2`.
pub fn pinchon_check(k: HalfInt, gamma_exp: u32) -> Result<f64> {
    if k.twice < 0 {
        return Err(Error::domain(format!(
            "2k+1 must be nonnegative, got k = {k}"
        )));
    }
    if gamma_exp % 2 == 1 {
        return Ok(0.0);
    }
    beta(k.value() + 1.0, (f64::from(gamma_exp) + 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn kernel_beta_example() {
        let z = HalfInt::ZERO;
        let kernel = PIKernel {
            k: h(2),
            q: z,
            qp: z,
            p: 0,
            theta1: 0.0,
            a: 0.0,
            b: PI,
            gamma: Sign::Plus,
        };
        assert!((p_i(&kernel).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn antiderivative_limits() {
        let z = HalfInt::ZERO;
        assert_eq!(i_s_antiderivative(0, 0, h(2), z, z, 0.0).unwrap(), 0.0);
        let v = i_s_antiderivative(1, 0, h(2), z, z, f64::NEG_INFINITY).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        let inside = i_s_antiderivative(1, 0, h(2), z, z, 1e8).unwrap();
        assert!((inside - 0.25).abs() < 1e-14);
    }

    #[test]
    fn unit_rank_scalar_is_four_pi() {
        let z = HalfInt::ZERO;
        let x = SpherePoint::new(0.9, 2.2).unwrap();
        assert!((s_integral(z, z, z, x).unwrap() - 4.0 * PI).norm() < 1e-13);
        assert!((eta_sphere_integral(z, z, z, x).unwrap() - 4.0 * PI).norm() < 1e-13);
    }

    #[test]
    fn gamma_minus_is_rejected_off_the_poles() {
        let z = HalfInt::ZERO;
        let kernel = PIKernel {
            k: h(2),
            q: z,
            qp: z,
            p: 0,
            theta1: 1.0,
            a: 0.0,
            b: PI,
            gamma: Sign::Minus,
        };
        assert!(matches!(p_i(&kernel), Err(Error::Domain(_))));
    }

    #[test]
    fn pinchon_values() {
        assert!((pinchon_check(HalfInt::ZERO, 0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(pinchon_check(h(3), 1).unwrap(), 0.0);
        assert!((pinchon_check(h(2), 2).unwrap() - 4.0 / 15.0).abs() < 1e-14);
    }
}
