//! Exact half-integer numbers stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An exact half-integer `twice / 2`.
///
/// Ranks `k`, `l`, `lambda` and projections `q`, `m` all use this type, so
/// compatibility checks reduce to parity tests on `twice`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    /// Twice the represented value (`5` means `5/2`).
    pub twice: i32,
}

impl HalfInt {
    /// Zero.
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    /// Builds the half-integer `twice / 2`.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    /// Builds an integer-valued half-integer.
    pub const fn int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    /// True when the value is an integer.
    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The value as a float.
    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// The value as an integer, or `None` for odd `twice`.
    pub fn to_int(self) -> Option<i32> {
        self.is_integer().then_some(self.twice / 2)
    }

    /// Absolute value.
    pub fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    /// Projections `-k, -k+1, ..., k` of a rank `k`; empty for negative `k`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        let k = self.twice;
        (0..=(if k < 0 { -1 } else { 2 * k }))
            .step_by(2)
            .map(move |s| HalfInt::from_twice(s - k))
    }

    /// Number of projections `2k + 1`.
    pub fn multiplicity(self) -> usize {
        (self.twice + 1).max(0) as usize
    }

    /// Position of projection `q` inside `projections()` of this rank.
    pub fn index_of(self, q: HalfInt) -> usize {
        ((q.twice + self.twice) / 2) as usize
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Parses `"3"`, `"-2"`, `"5/2"`, `"-1/2"` or a decimal such as `"2.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::domain(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt::int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = t.parse::<i32>() {
            Ok(HalfInt::int(n))
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            let twice = 2.0 * x;
            if twice.is_finite() && twice == twice.round() && twice.abs() < 1e9 {
                Ok(HalfInt::from_twice(twice as i32))
            } else {
                Err(bad())
            }
        }
    }
}

impl serde::Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for HalfInt {
    /// Accepts `"5/2"`-style strings as well as JSON numbers such as `2.5` or `3`.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Number(x) => x.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks that `q` is a projection of rank `k`: `k >= 0`, `|q| <= k` and `k - q` integer.
pub fn check_projection(k: HalfInt, q: HalfInt) -> Result<()> {
    if k.twice < 0 {
        return Err(Error::domain(format!("negative rank {k}")));
    }
    if q.twice.abs() > k.twice || (k.twice - q.twice) % 2 != 0 {
        return Err(Error::domain(format!(
            "projection {q} is not compatible with rank {k}"
        )));
    }
    Ok(())
}

/// `i^x` for `x = twice / 2`, exact on the eighth roots of unity.
///
/// Fractional powers follow the principal branch `i^x = exp(i pi x / 2)`.
pub fn i_pow(x: HalfInt) -> Complex64 {
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
    match x.twice.rem_euclid(8) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(H, H),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-H, H),
        4 => Complex64::new(-1.0, 0.0),
        5 => Complex64::new(-H, -H),
        6 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(H, -H),
    }
}

/// `(-1)^x` for `x = twice / 2`, taken as `exp(i pi x)`.
pub fn minus_one_pow(x: HalfInt) -> Complex64 {
    match x.twice.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(-1)^n` for an integer `n`.
pub fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["5/2", "-1/2", "3", "0", "-4"] {
            let h: HalfInt = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert_eq!("2.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(5));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn projections_cover_the_multiplet() {
        let k = HalfInt::from_twice(3);
        let qs: Vec<i32> = k.projections().map(|q| q.twice).collect();
        assert_eq!(qs, vec![-3, -1, 1, 3]);
        assert_eq!(k.multiplicity(), 4);
        assert_eq!(k.index_of(HalfInt::from_twice(1)), 2);
        assert_eq!(HalfInt::int(-1).projections().count(), 0);
    }

    #[test]
    fn projection_checks() {
        assert!(check_projection(HalfInt::int(1), HalfInt::int(1)).is_ok());
        assert!(check_projection(HalfInt::int(1), HalfInt::from_twice(1)).is_err());
        assert!(check_projection(HalfInt::int(1), HalfInt::int(2)).is_err());
    }

    #[test]
    fn fractional_phases_use_the_principal_branch() {
        let x = HalfInt::from_twice(1);
        let expect = Complex64::from_polar(1.0, std::f64::consts::PI / 4.0);
        assert!((i_pow(x) - expect).norm() < 1e-15);
        assert!((minus_one_pow(x) - Complex64::i()).norm() < 1e-15);
        assert_eq!(i_pow(HalfInt::int(-1)), Complex64::new(0.0, -1.0));
    }
}
