use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TangleError;

/// `p/q` in lowest terms with `q ≥ 0`; `1/0` is the only representation of ∞.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtendedRational {
    p: i64,
    q: i64,
}

impl ExtendedRational {
    pub const INFINITY: ExtendedRational = ExtendedRational { p: 1, q: 0 };
    pub const ZERO: ExtendedRational = ExtendedRational { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Result<Self, TangleError> {
        Self::from_wide(p as i128, q as i128)
    }

    pub fn integer(n: i64) -> Self {
        ExtendedRational { p: n, q: 1 }
    }

    pub(crate) fn from_wide(p: i128, q: i128) -> Result<Self, TangleError> {
        if p == 0 && q == 0 {
            return Err(TangleError::ZeroOverZero);
        }
        if q == 0 {
            return Ok(Self::INFINITY);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        let p = i64::try_from(p).map_err(|_| TangleError::Overflow)?;
        let q = i64::try_from(q).map_err(|_| TangleError::Overflow)?;
        Ok(ExtendedRational { p, q })
    }

    pub fn numerator(&self) -> i64 {
        self.p
    }

    pub fn denominator(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }

    fn finite(&self) -> Result<(i128, i128), TangleError> {
        if self.is_infinite() {
            return Err(TangleError::Infinite);
        }
        Ok((self.p as i128, self.q as i128))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, TangleError> {
        let (a, b) = self.finite()?;
        let (c, d) = rhs.finite()?;
        Self::from_wide(a * d + c * b, b * d)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, TangleError> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul_int(&self, k: i64) -> Result<Self, TangleError> {
        let (a, b) = self.finite()?;
        Self::from_wide(a * k as i128, b)
    }

    /// `1/x`, with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> Self {
        if self.is_infinite() {
            return Self::ZERO;
        }
        if self.p == 0 {
            return Self::INFINITY;
        }
        Self::from_wide(self.q as i128, self.p as i128).expect("nonzero")
    }

    pub fn neg(&self) -> Self {
        if self.is_infinite() {
            return *self;
        }
        ExtendedRational { p: -self.p, q: self.q }
    }

    pub fn abs(&self) -> Self {
        ExtendedRational { p: self.p.abs(), q: self.q }
    }

    /// Smallest integer `≥ self` for finite values.
    pub fn ceil(&self) -> Result<i64, TangleError> {
        self.finite()?;
        Ok(Integer::div_floor(&self.p, &self.q) + i64::from(Integer::mod_floor(&self.p, &self.q) != 0))
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.is_infinite() || other.is_infinite() {
            return (self == other).then_some(Ordering::Equal);
        }
        Some((self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128)))
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.p),
            q => write!(f, "{}/{}", self.p, q),
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `p/q`, a bare integer, or `inf` / `∞`.
impl FromStr for ExtendedRational {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, TangleError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Self::INFINITY);
        }
        let bad = || TangleError::Parse(format!("not a fraction: {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        ExtendedRational::new(p, q)
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(ExtendedRational::new(4, -6).unwrap(), r("-2/3"));
        assert_eq!(ExtendedRational::new(-5, 0).unwrap(), ExtendedRational::INFINITY);
        assert_eq!(ExtendedRational::new(0, -7).unwrap(), ExtendedRational::ZERO);
        assert_eq!(ExtendedRational::new(0, 0), Err(TangleError::ZeroOverZero));
        assert_eq!(r("-2/3").denominator(), 3);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("inf"), ExtendedRational::INFINITY);
        assert_eq!(r(" 13 / 2 ").to_string(), "13/2");
        assert_eq!(r("-37").to_string(), "-37");
        assert_eq!(r("6/3").to_string(), "2");
        assert!("1/0".parse::<ExtendedRational>().is_err());
        assert!("x".parse::<ExtendedRational>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(r("19/2").checked_sub(&r("3")).unwrap(), r("13/2"));
        assert_eq!(r("-11/3").checked_add(&r("3")).unwrap(), r("-2/3"));
        assert_eq!(r("1/2").recip(), r("2"));
        assert_eq!(r("0").recip(), ExtendedRational::INFINITY);
        assert_eq!(ExtendedRational::INFINITY.recip(), r("0"));
        assert!(ExtendedRational::INFINITY.checked_add(&r("1")).is_err());
        assert_eq!(r("13/2").ceil().unwrap(), 7);
        assert_eq!(r("-5/3").ceil().unwrap(), -1);
        assert_eq!(r("4").ceil().unwrap(), 4);
        assert!(r("1/3") < r("1/2"));
    }
}
