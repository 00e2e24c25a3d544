//! Factorials, the Beta function and the Gauss hypergeometric function on `z <= 0`.

use std::sync::OnceLock;

use statrs::function::gamma::{gamma, ln_gamma};

use super::halfint::HalfInt;
use crate::error::{Error, Result};

/// Largest `n` whose factorial is finite in `f64`.
const MAX_FACTORIAL: usize = 170;

fn factorial_table() -> &'static [f64; MAX_FACTORIAL + 1] {
    static TABLE: OnceLock<[f64; MAX_FACTORIAL + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_FACTORIAL + 1];
        for n in 1..=MAX_FACTORIAL {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` as a float for `0 <= n <= 170`; infinite beyond.
///
/// Negative arguments are a caller bug and return `NaN` so that they are
/// caught by the finiteness checks of the public operations.
pub(crate) fn factorial(n: i64) -> f64 {
    if n < 0 {
        f64::NAN
    } else if (n as usize) <= MAX_FACTORIAL {
        factorial_table()[n as usize]
    } else {
        f64::INFINITY
    }
}

/// Natural logarithm of `n!` for a nonnegative integer `n`.
///
/// Values up to `20!` come from the exact product table; larger arguments use
/// log-gamma, which stays finite far beyond the `f64` range of `n!`.
pub fn factorial_ln(n: HalfInt) -> Result<f64> {
    let m = n
        .to_int()
        .filter(|&m| m >= 0)
        .ok_or_else(|| Error::domain(format!("factorial of {n} is not defined")))?;
    Ok(factorial_ln_int(i64::from(m)))
}

pub(crate) fn factorial_ln_int(n: i64) -> f64 {
    if n <= 20 {
        factorial(n).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// The Beta function `B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)` for `x, y > 0`.
///
/// The formula is symmetric in its arguments by construction. Direct gamma
/// values are used while `x + y` stays inside the `f64` range of `Gamma`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!(
            "beta requires positive finite arguments, got ({x}, {y})"
        )));
    }
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo + hi < 170.0 {
        Ok(gamma(lo) * gamma(hi) / gamma(lo + hi))
    } else {
        Ok((ln_gamma(lo) + ln_gamma(hi) - ln_gamma(lo + hi)).exp())
    }
}

/// Iteration cap for the non-terminating hypergeometric series.
const HYP_MAX_TERMS: usize = 200_000;

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x == x.round() && x > -1e9).then(|| (-x) as usize)
}

/// Sums the terminating series `sum_{j=0}^{n} (a)_j (b)_j / ((c)_j j!) w^j`.
///
/// Returns the sum and the sum of the absolute values of its terms.
fn hyp_polynomial(a: f64, b: f64, c: f64, w: f64, n: usize) -> (f64, f64) {
    let mut term = 1.0;
    let (mut sum, mut magnitude) = (1.0, 1.0);
    for j in 0..n {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * w;
        sum += term;
        magnitude += f64::abs(term);
    }
    (sum, magnitude)
}

/// Sums the convergent series for `0 <= w < 1` until the terms stop contributing.
///
/// Returns the sum and the sum of the absolute values of its terms.
fn hyp_series(a: f64, b: f64, c: f64, w: f64) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let (mut sum, mut magnitude) = (1.0, 1.0);
    for j in 0..HYP_MAX_TERMS {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * w;
        sum += term;
        magnitude += f64::abs(term);
        if !sum.is_finite() {
            break;
        }
        if j > 2 && term.abs() <= 1e-17 * sum.abs() {
            return Ok((sum, magnitude));
        }
    }
    Err(Error::numeric(
        format!("2F1({a}, {b}; {c}; {w}) series did not converge"),
        vec![sum, term],
    ))
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `z <= 0`.
///
/// A terminating parameter gives a finite polynomial. Otherwise the Pfaff
/// transformations map `z` to `w = z / (z - 1)` in `[0, 1)`, and the variant
/// that terminates is preferred when one exists.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_with_magnitude(a, b, c, z).map(|(value, _)| value)
}

/// [`gauss_2f1`] together with the same expression evaluated on the absolute
/// values of the series terms, which bounds the rounding error of the value.
pub(crate) fn gauss_2f1_with_magnitude(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, f64)> {
    if nonpositive_integer(c).is_some() {
        return Err(Error::domain(format!(
            "2F1 undefined for nonpositive integer c = {c}"
        )));
    }
    if !z.is_finite() || z > 0.0 {
        return Err(Error::domain(format!(
            "2F1 implemented for z <= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok((1.0, 1.0));
    }
    let terminating = nonpositive_integer;
    let direct = match (terminating(a), terminating(b)) {
        (Some(na), Some(nb)) => Some(na.min(nb)),
        (na, nb) => na.or(nb),
    };
    if let Some(n) = direct {
        return Ok(hyp_polynomial(a, b, c, z, n));
    }
    let w = z / (z - 1.0);
    let one_minus_z = 1.0 - z;
    let scaled = |factor: f64, (v, m): (f64, f64)| (factor * v, factor.abs() * m);
    if let Some(n) = terminating(c - b) {
        return Ok(scaled(
            one_minus_z.powf(-a),
            hyp_polynomial(a, c - b, c, w, n),
        ));
    }
    if let Some(n) = terminating(c - a) {
        return Ok(scaled(
            one_minus_z.powf(-b),
            hyp_polynomial(c - a, b, c, w, n),
        ));
    }
    Ok(scaled(one_minus_z.powf(-a), hyp_series(a, c - b, c, w)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_ln_examples() {
        assert_eq!(factorial_ln(HalfInt::int(0)).unwrap(), 0.0);
        assert!((factorial_ln(HalfInt::int(5)).unwrap() - 120f64.ln()).abs() < 1e-15);
        let big = factorial_ln(HalfInt::int(170)).unwrap();
        assert!(big.is_finite());
        assert!((big - 706.573_062_245_787_4).abs() < 1e-9);
        assert!(factorial_ln(HalfInt::from_twice(3)).is_err());
        assert!(factorial_ln(HalfInt::int(-1)).is_err());
    }

    #[test]
    fn beta_examples() {
        assert!((beta(2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        let pi16 = std::f64::consts::PI / 16.0;
        assert!((beta(1.5, 2.5).unwrap() - pi16).abs() < 1e-14);
        assert_eq!(beta(0.7, 3.2).unwrap(), beta(3.2, 0.7).unwrap());
        assert!(beta(0.0, 1.0).is_err());
        let large = beta(120.0, 80.0).unwrap();
        let logform = (ln_gamma(120.0) + ln_gamma(80.0) - ln_gamma(200.0)).exp();
        assert!((large / logform - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_2f1_examples() {
        assert_eq!(gauss_2f1(0.3, 0.7, 1.1, 0.0).unwrap(), 1.0);
        let ln2 = std::f64::consts::LN_2;
        assert!((gauss_2f1(1.0, 1.0, 2.0, -1.0).unwrap() - ln2).abs() < 1e-14);
        // (-2)_j (3)_j / (1)_j j! (-1)^j: 1 + 6 + 6 = 13.
        assert!((gauss_2f1(-2.0, 3.0, 1.0, -1.0).unwrap() - 13.0).abs() < 1e-13);
        assert!(gauss_2f1(1.0, 1.0, -2.0, -0.5).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn gauss_2f1_large_negative_argument() {
        // 2F1(1,1;2;z) = ln(1-z)/(-z)
        for z in [-0.5f64, -3.0, -40.0] {
            let exact = (1.0 - z).ln() / (-z);
            let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            assert!((v / exact - 1.0).abs() < 1e-12, "z={z} v={v} exact={exact}");
        }
        // 2F1(a,b;b;z) = (1-z)^-a
        let v = gauss_2f1(0.75, 2.5, 2.5, -7.0).unwrap();
        assert!((v - 8f64.powf(-0.75)).abs() < 1e-14);
    }
}
