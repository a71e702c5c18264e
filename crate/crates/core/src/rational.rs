//! Exact rational arithmetic on i64 with overflow rejection, plus the
//! extended period value (finite rational or infinite) used by the
//! principal-product constructions.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction with positive denominator. All arithmetic goes through
/// i128 intermediates and errors on anything that does not fit back in i64,
/// so results are exact or rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::RationalOverflow)
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Rational> {
        if den == 0 {
            return Err(Error::InvalidRational("zero denominator".into()));
        }
        let sign = if (num < 0) != (den < 0) && num != 0 {
            -1
        } else {
            1
        };
        let g = gcd(num, den).max(1);
        Ok(Rational {
            num: sign * (num / g).abs(),
            den: (den / g).abs(),
        })
    }

    pub fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn zero() -> Rational {
        Rational::integer(0)
    }

    pub fn one() -> Rational {
        Rational::integer(1)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn build(num: i128, den: i128) -> Result<Rational> {
        if den == 0 {
            return Err(Error::InvalidRational("zero denominator".into()));
        }
        let sign: i128 = if (num < 0) != (den < 0) && num != 0 {
            -1
        } else {
            1
        };
        let (mut n, mut d) = (num.abs(), den.abs());
        let g = {
            let (mut a, mut b) = (n, d);
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a.max(1)
        };
        n /= g;
        d /= g;
        Ok(Rational {
            num: narrow(sign * n)?,
            den: narrow(d)?,
        })
    }

    pub fn add(&self, other: &Rational) -> Result<Rational> {
        Rational::build(
            self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn sub(&self, other: &Rational) -> Result<Rational> {
        Rational::build(
            self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn mul(&self, other: &Rational) -> Result<Rational> {
        Rational::build(
            self.num as i128 * other.num as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn div(&self, other: &Rational) -> Result<Rational> {
        if other.is_zero() {
            return Err(Error::InvalidRational("division by zero".into()));
        }
        Rational::build(
            self.num as i128 * other.den as i128,
            self.den as i128 * other.num as i128,
        )
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().div(self)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q`, and `-p/q`. No automatic rationalization of
    /// decimal strings: floating periods must be matched to rationals by
    /// the caller.
    fn from_str(s: &str) -> Result<Rational> {
        let s = s.trim();
        let bad = || Error::InvalidRational(format!("cannot parse `{s}` as an exact rational"));
        match s.split_once('/') {
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(Rational::integer(n))
            }
            Some((a, b)) => {
                let n: i64 = a.trim().parse().map_err(|_| bad())?;
                let d: i64 = b.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
        }
    }
}

/// A minimal period: a finite positive rational (in caller-chosen units) or
/// infinite for non-periodic flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Period {
    Finite(Rational),
    Infinite,
}

impl Period {
    pub fn finite(r: Rational) -> Result<Period> {
        if !r.is_positive() {
            return Err(Error::InvalidRational("period must be positive".into()));
        }
        Ok(Period::Finite(r))
    }

    pub fn as_finite(&self) -> Option<Rational> {
        match self {
            Period::Finite(r) => Some(*r),
            Period::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Period::Finite(r) => r.to_f64(),
            Period::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Finite(r) => write!(f, "{r}"),
            Period::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Period> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinite") || t == "∞" {
            return Ok(Period::Infinite);
        }
        Period::finite(t.parse()?)
    }
}
