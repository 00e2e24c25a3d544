//! Parsers for the textual argument forms of the command line.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::SpherePoint;
use crate::halfint_algebra::{CNum, HalfInt};
use crate::rcgc::RadialWeight;

/// Failure of a command, carrying its process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    /// 1 parse error, 2 domain error, 3 numeric error.
    pub code: i32,
    /// Message for stderr.
    pub message: String,
}

impl CliError {
    /// A parse failure (exit code 1).
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Degenerate(_) => 2,
            Error::Numeric { .. } | Error::Divergent(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// A raw argument value. JSON requests may give it as a string or a number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Text(pub String);

impl FromStr for Text {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Text(s.to_string()))
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Text {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Text(s) => Text(s),
            Raw::Number(n) => Text(n.to_string()),
        })
    }
}

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::parse(format!("--{key}: cannot read {value:?} as {what}"))
}

/// A half-integer such as `"5/2"`, `"-1/2"` or `"3"`.
pub fn halfint(key: &str, t: &Text) -> Result<HalfInt, CliError> {
    t.0.parse().map_err(|_| bad(key, &t.0, "a half-integer"))
}

/// An integer rank or projection.
pub fn integer(key: &str, t: &Text) -> Result<i32, CliError> {
    t.0.trim().parse().map_err(|_| bad(key, &t.0, "an integer"))
}

/// A finite decimal number.
pub fn real(key: &str, t: &Text) -> Result<f64, CliError> {
    match t.0.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad(key, &t.0, "a finite number")),
    }
}

/// An angle in radians: a decimal (`"0.5"`) or a multiple of pi (`"pi"`, `"3pi/2"`, `"-pi/6"`, `"2*pi/3"`, `"π/4"`).
pub fn angle_value(s: &str) -> Option<f64> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let v = match t.find("pi") {
        Some(idx) => {
            let pre = t[..idx].trim().trim_end_matches('*').trim();
            let post = t[idx + 2..].trim();
            let coef = match pre {
                "" | "+" => 1.0,
                "-" => -1.0,
                x => x.parse::<f64>().ok()?,
            };
            let den = if post.is_empty() {
                1.0
            } else {
                post.strip_prefix('/')?.trim().parse::<f64>().ok()?
            };
            if den == 0.0 {
                return None;
            }
            coef * PI / den
        }
        None => t.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

/// An angle argument; see [`angle_value`].
pub fn angle(key: &str, t: &Text) -> Result<f64, CliError> {
    angle_value(&t.0).ok_or_else(|| bad(key, &t.0, "an angle"))
}

/// A point `"theta,phi"`; each part is an angle. Out-of-range angles are a domain error.
pub fn point(key: &str, t: &Text) -> Result<SpherePoint, CliError> {
    let (a, b) =
        t.0.split_once(',')
            .ok_or_else(|| bad(key, &t.0, "a point theta,phi"))?;
    let theta = angle_value(a).ok_or_else(|| bad(key, &t.0, "a point theta,phi"))?;
    let phi = angle_value(b).ok_or_else(|| bad(key, &t.0, "a point theta,phi"))?;
    Ok(SpherePoint::new(theta, phi)?)
}

/// Radial weights `g_mu`. The shorthands are `"delta0"` and `"ones"`; otherwise
/// `2l+1` comma-separated complex numbers such as `"0,1+0.5i,-2"`.
pub fn weights(key: &str, l: HalfInt, t: &Text) -> Result<RadialWeight, CliError> {
    match t.0.trim() {
        "delta0" => Ok(RadialWeight::delta0(l)),
        "ones" => Ok(RadialWeight::ones(l)),
        list => {
            let values = list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<CNum>()
                        .map_err(|_| bad(key, x, "a complex number"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != l.multiplicity() {
                return Err(CliError::from(Error::Domain(format!(
                    "--{key}: rank {l} needs {} weights, got {}",
                    l.multiplicity(),
                    values.len()
                ))));
            }
            Ok(RadialWeight {
                l,
                values,
                r_less: 1.0,
                r_greater: 1.0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(angle_value("3pi/2"), Some(3.0 * PI / 2.0));
        assert_eq!(angle_value("pi/6"), Some(PI / 6.0));
        assert_eq!(angle_value("-pi/4"), Some(-PI / 4.0));
        assert_eq!(angle_value("2*pi/3"), Some(2.0 * PI / 3.0));
        assert_eq!(angle_value("π"), Some(PI));
        assert_eq!(angle_value("0.25"), Some(0.25));
        assert_eq!(angle_value("pi/0"), None);
        assert_eq!(angle_value("pie"), None);
        assert_eq!(angle_value("nan"), None);
    }

    #[test]
    fn points_and_weights() {
        let p = point("x1", &Text("pi/6,pi/4".into())).unwrap();
        assert_eq!((p.theta, p.phi), (PI / 6.0, PI / 4.0));
        assert_eq!(point("x1", &Text("4,0".into())).unwrap_err().code, 2);
        assert_eq!(point("x1", &Text("1".into())).unwrap_err().code, 1);
        let w = weights("g", HalfInt::int(1), &Text("1, 2-1i, 0.5i".into())).unwrap();
        assert_eq!(w.values[1], CNum::new(2.0, -1.0));
        assert_eq!(
            weights("g", HalfInt::int(1), &Text("1,2".into()))
                .unwrap_err()
                .code,
            2
        );
    }
}
