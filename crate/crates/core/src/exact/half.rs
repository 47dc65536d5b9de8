use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// A spin `j ∈ N/2`, stored as `2j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    twice: u32,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };
    pub const HALF: HalfInteger = HalfInteger { twice: 1 };
    pub const ONE: HalfInteger = HalfInteger { twice: 2 };

    pub const fn from_twice(twice: u32) -> Self {
        HalfInteger { twice }
    }

    pub const fn from_int(j: u32) -> Self {
        HalfInteger { twice: 2 * j }
    }

    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// Dimension `2j + 1` of the irrep.
    pub const fn dim(self) -> u32 {
        self.twice + 1
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new((self.twice as i64).into(), 2i64.into())
    }

    /// Magnetic indices `j, j-1, …, -j` in decreasing order.
    pub fn ms(self) -> impl Iterator<Item = MagneticIndex> {
        let t = self.twice as i32;
        (0..=self.twice).map(move |k| MagneticIndex { twice: t - 2 * k as i32 })
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"k"`, `"k/2"` or a decimal with fractional part `.0` or `.5`.
fn parse_twice(s: &str) -> Result<i64, ExactError> {
    let t = s.trim();
    let bad = || ExactError::Parse(format!("not a half-integer: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        return match d.trim() {
            "1" => Ok(2 * n),
            "2" => Ok(n),
            _ => Err(bad()),
        };
    }
    if let Some((w, frac)) = t.split_once('.') {
        let neg = w.starts_with('-');
        let w: i64 = if w == "-" || w.is_empty() { 0 } else { w.parse().map_err(|_| bad())? };
        let frac = frac.trim_end_matches('0');
        let half = match frac {
            "" => 0,
            "5" => 1,
            _ => return Err(bad()),
        };
        return Ok(2 * w + if neg { -half } else { half });
    }
    let n: i64 = t.parse().map_err(|_| bad())?;
    Ok(2 * n)
}

impl FromStr for HalfInteger {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let t = parse_twice(s)?;
        u32::try_from(t)
            .map(HalfInteger::from_twice)
            .map_err(|_| ExactError::Parse(format!("spin must be nonnegative: {s:?}")))
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInteger {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A magnetic index `m`, stored as `2m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MagneticIndex {
    twice: i32,
}

impl MagneticIndex {
    pub const fn from_twice(twice: i32) -> Self {
        MagneticIndex { twice }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    /// `|m| ≤ j` and `j - m` integral.
    pub fn valid_for(self, j: HalfInteger) -> bool {
        let t = j.twice() as i32;
        self.twice.abs() <= t && (t - self.twice) % 2 == 0
    }

    pub fn neg(self) -> Self {
        MagneticIndex { twice: -self.twice }
    }
}

impl fmt::Display for MagneticIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for MagneticIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for MagneticIndex {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let t = parse_twice(s)?;
        i32::try_from(t)
            .map(MagneticIndex::from_twice)
            .map_err(|_| ExactError::Parse(format!("magnetic index out of range: {s:?}")))
    }
}

impl Serialize for MagneticIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MagneticIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        for (s, t) in [("1/2", 1), ("0.5", 1), ("3", 6), ("3/2", 3), ("1.5", 3), ("2.0", 4), ("4/1", 8)] {
            assert_eq!(s.parse::<HalfInteger>().unwrap().twice(), t, "{s}");
        }
        for s in ["-1", "1/3", "0.25", "x"] {
            assert!(s.parse::<HalfInteger>().is_err(), "{s}");
        }
        assert_eq!("-1/2".parse::<MagneticIndex>().unwrap().twice(), -1);
        assert_eq!("-0.5".parse::<MagneticIndex>().unwrap().twice(), -1);
        assert_eq!("-1".parse::<MagneticIndex>().unwrap().twice(), -2);
    }

    #[test]
    fn display_and_order() {
        assert_eq!(HalfInteger::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInteger::from_twice(4).to_string(), "2");
        assert!(HalfInteger::HALF < HalfInteger::ONE);
        let ms: Vec<i32> = HalfInteger::ONE.ms().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![2, 0, -2]);
        assert!(MagneticIndex::from_twice(1).valid_for(HalfInteger::from_twice(3)));
        assert!(!MagneticIndex::from_twice(2).valid_for(HalfInteger::from_twice(3)));
    }
}
