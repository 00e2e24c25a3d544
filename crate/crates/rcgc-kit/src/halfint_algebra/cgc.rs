//! Clebsch-Gordan coefficients in the Condon-Shortley phase convention.
//!
//! The Racah sum is evaluated exactly. Every factorial is held as a vector of
//! prime exponents, the common prime power of all summands is pulled out, the
//! remaining integer cofactors are added as big integers, and the square of the
//! result is rounded to `f64` once before the final square root.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::halfint::{check_projection, HalfInt};
use crate::error::Result;

/// A coupling triple `(j1, j2, j3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    /// First rank.
    pub j1: HalfInt,
    /// Second rank.
    pub j2: HalfInt,
    /// Coupled rank.
    pub j3: HalfInt,
}

impl Triangle {
    /// Builds the triple.
    pub fn new(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> Self {
        Triangle { j1, j2, j3 }
    }

    /// True when `|j1 - j2| <= j3 <= j1 + j2` and `j1 + j2 + j3` is an integer.
    pub fn couples(&self) -> bool {
        let (a, b, c) = (self.j1.twice, self.j2.twice, self.j3.twice);
        a >= 0 && b >= 0 && c >= 0 && (a - b).abs() <= c && c <= a + b && (a + b + c) % 2 == 0
    }

    /// The coupled ranks `|j1 - j2|, ..., j1 + j2` allowed for two given ranks.
    pub fn coupled_ranks(j1: HalfInt, j2: HalfInt) -> impl Iterator<Item = HalfInt> {
        let lo = (j1.twice - j2.twice).abs();
        let hi = j1.twice + j2.twice;
        (lo..=hi).step_by(2).map(HalfInt::from_twice)
    }
}

/// Factorials of `0..=FACT_PRIME_MAX` as prime exponent vectors.
const FACT_PRIME_MAX: usize = 400;

struct PrimeTable {
    primes: Vec<u32>,
    fact_exponents: Vec<Vec<i32>>,
}

fn prime_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let primes: Vec<u32> = (2..=FACT_PRIME_MAX as u32)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        let mut fact_exponents = vec![vec![0i32; primes.len()]];
        for n in 1..=FACT_PRIME_MAX {
            let mut e = fact_exponents[n - 1].clone();
            let mut m = n as u32;
            for (i, &p) in primes.iter().enumerate() {
                while m.is_multiple_of(p) {
                    e[i] += 1;
                    m /= p;
                }
                if m == 1 {
                    break;
                }
            }
            fact_exponents.push(e);
        }
        PrimeTable {
            primes,
            fact_exponents,
        }
    })
}

fn add_fact(acc: &mut [i32], n: i64, sign: i32) {
    let t = prime_table();
    for (a, e) in acc.iter_mut().zip(&t.fact_exponents[n as usize]) {
        *a += sign * e;
    }
}

fn prime_power_product(exponents: &[i32]) -> (BigInt, BigInt) {
    let t = prime_table();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&p, &e) in t.primes.iter().zip(exponents) {
        if e > 0 {
            num *= BigInt::from(p).pow(e as u32);
        } else if e < 0 {
            den *= BigInt::from(p).pow((-e) as u32);
        }
    }
    (num, den)
}

/// `<j1 m1 j2 m2 | j m>` in the Condon-Shortley convention.
///
/// Returns `0.0` when the triangle or projection-sum condition fails. An
/// incompatible `(j, m)` pair is a domain error.
pub fn cgc(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;
    Ok(cgc_unchecked(j1, m1, j2, m2, j, m))
}

/// `cgc` for arguments already known to be compatible pairs.
pub(crate) fn cgc_unchecked(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> f64 {
    if m1.twice + m2.twice != m.twice || !Triangle::new(j1, j2, j).couples() {
        return 0.0;
    }
    if m1.twice.abs() > j1.twice || m2.twice.abs() > j2.twice || m.twice.abs() > j.twice {
        return 0.0;
    }
    let h = |x: i32| i64::from(x) / 2;
    let (tj1, tj2, tj) = (j1.twice, j2.twice, j.twice);
    let (tm1, tm2, tm) = (m1.twice, m2.twice, m.twice);
    let a1 = h(tj1 + tj2 - tj);
    let a2 = h(tj1 - tj2 + tj);
    let a3 = h(-tj1 + tj2 + tj);
    let a4 = h(tj1 + tj2 + tj) + 1;
    let top = a4.max(h(tj + tj.abs()) + 1);
    if top as usize > FACT_PRIME_MAX {
        return cgc_log_domain(j1, m1, j2, m2, j, m);
    }

    let nprimes = prime_table().primes.len();
    // Radicand: (2j+1) a1! a2! a3! / a4! * (j1+m1)!(j1-m1)!(j2+m2)!(j2-m2)!(j+m)!(j-m)!
    let mut radicand = vec![0i32; nprimes];
    for n in [a1, a2, a3] {
        add_fact(&mut radicand, n, 1);
    }
    add_fact(&mut radicand, a4, -1);
    for n in [
        h(tj1 + tm1),
        h(tj1 - tm1),
        h(tj2 + tm2),
        h(tj2 - tm2),
        h(tj + tm),
        h(tj - tm),
    ] {
        add_fact(&mut radicand, n, 1);
    }

    let b1 = h(tj1 - tm1);
    let b2 = h(tj2 + tm2);
    let c1 = h(tj - tj2 + tm1);
    let c2 = h(tj - tj1 - tm2);
    let t_min = 0.max(-c1).max(-c2);
    let t_max = a1.min(b1).min(b2);
    if t_min > t_max {
        return 0.0;
    }
    let terms: Vec<(i64, Vec<i32>)> = (t_min..=t_max)
        .map(|t| {
            let mut e = vec![0i32; nprimes];
            for n in [t, a1 - t, b1 - t, b2 - t, c1 + t, c2 + t] {
                add_fact(&mut e, n, -1);
            }
            (t, e)
        })
        .collect();
    let common: Vec<i32> = (0..nprimes)
        .map(|i| terms.iter().map(|(_, e)| e[i]).min().unwrap_or(0))
        .collect();
    let mut sum = BigInt::zero();
    for (t, e) in &terms {
        let rel: Vec<i32> = e.iter().zip(&common).map(|(a, c)| a - c).collect();
        let (num, _) = prime_power_product(&rel);
        if t % 2 == 0 {
            sum += num;
        } else {
            sum -= num;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let negative = sum.is_negative();
    for (r, c) in radicand.iter_mut().zip(&common) {
        *r += 2 * c;
    }
    let (mut num, den) = prime_power_product(&radicand);
    num *= BigInt::from(tj + 1);
    num *= &sum * &sum;
    let squared = BigRational::new(num, den).to_f64().unwrap_or(f64::NAN);
    let value = squared.sqrt();
    if negative {
        -value
    } else {
        value
    }
}

/// Log-domain Racah sum for ranks beyond the exact factorial table.
fn cgc_log_domain(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> f64 {
    use super::special::factorial_ln_int as lf;
    let h = |x: i32| i64::from(x) / 2;
    let (tj1, tj2, tj) = (j1.twice, j2.twice, j.twice);
    let (tm1, tm2, tm) = (m1.twice, m2.twice, m.twice);
    let a1 = h(tj1 + tj2 - tj);
    let pre = 0.5
        * (f64::from(tj + 1).ln() + lf(a1) + lf(h(tj1 - tj2 + tj)) + lf(h(-tj1 + tj2 + tj))
            - lf(h(tj1 + tj2 + tj) + 1)
            + lf(h(tj1 + tm1))
            + lf(h(tj1 - tm1))
            + lf(h(tj2 + tm2))
            + lf(h(tj2 - tm2))
            + lf(h(tj + tm))
            + lf(h(tj - tm)));
    let b1 = h(tj1 - tm1);
    let b2 = h(tj2 + tm2);
    let c1 = h(tj - tj2 + tm1);
    let c2 = h(tj - tj1 - tm2);
    let t_min = 0.max(-c1).max(-c2);
    let t_max = a1.min(b1).min(b2);
    (t_min..=t_max)
        .map(|t| {
            let l = pre - lf(t) - lf(a1 - t) - lf(b1 - t) - lf(b2 - t) - lf(c1 + t) - lf(c2 + t);
            if t % 2 == 0 {
                l.exp()
            } else {
                -l.exp()
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn examples() {
        let one = HalfInt::int(1);
        let zero = HalfInt::ZERO;
        assert_eq!(cgc(hi(5), hi(3), zero, zero, hi(5), hi(3)).unwrap(), 1.0);
        let v = cgc(one, zero, one, zero, HalfInt::int(2), zero).unwrap();
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let v = cgc(one, one, one, -one, zero, zero).unwrap();
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let v = cgc(hi(1), hi(1), hi(1), hi(-1), zero, zero).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_give_zero() {
        let one = HalfInt::int(1);
        assert_eq!(cgc(one, one, one, one, one, one).unwrap(), 0.0);
        assert_eq!(
            cgc(one, one, one, HalfInt::ZERO, HalfInt::int(3), one).unwrap(),
            0.0
        );
        assert_eq!(
            cgc(one, HalfInt::ZERO, one, HalfInt::ZERO, one, HalfInt::ZERO).unwrap(),
            0.0
        );
        assert!(cgc(one, hi(1), one, HalfInt::ZERO, one, HalfInt::ZERO).is_err());
    }

    #[test]
    fn large_ranks_fall_back_to_log_domain() {
        let j = HalfInt::int(120);
        let v = cgc_unchecked(
            j,
            HalfInt::ZERO,
            j,
            HalfInt::ZERO,
            HalfInt::ZERO,
            HalfInt::ZERO,
        );
        // <j 0 j 0 | 0 0> = (-1)^j / sqrt(2j+1)
        assert!((v - 1.0 / 241f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn triangle_ranks() {
        let ks: Vec<HalfInt> = Triangle::coupled_ranks(hi(3), HalfInt::int(1)).collect();
        assert_eq!(ks, vec![hi(1), hi(3), hi(5)]);
        assert!(!Triangle::new(hi(1), hi(1), hi(1)).couples());
    }
}
