use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exact::ExactScalar;

/// A spider phase: an exact rational multiple of π, or radians.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Phase {
    /// `num/den · π`, reduced, `0 ≤ num < 2·den`.
    Frac { num: i64, den: i64 },
    Rad { rad: f64 },
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

impl Phase {
    pub const fn zero() -> Self {
        Phase::Frac { num: 0, den: 1 }
    }

    pub const fn pi() -> Self {
        Phase::Frac { num: 1, den: 1 }
    }

    /// `num/den · π` reduced modulo 2π. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator is zero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den).max(1);
        num /= g;
        den /= g;
        Phase::Frac { num: num.rem_euclid(2 * den), den }
    }

    pub fn radians(rad: f64) -> Self {
        Phase::Rad { rad }
    }

    pub fn to_radians(self) -> f64 {
        match self {
            Phase::Frac { num, den } => num as f64 / den as f64 * PI,
            Phase::Rad { rad } => rad,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Phase::Frac { num, .. } => num == 0,
            Phase::Rad { rad } => rad == 0.0,
        }
    }

    pub fn is_pi(self) -> bool {
        matches!(self, Phase::Frac { num: 1, den: 1 })
    }

    /// Multiples of π/2 are evaluated over Q(i)[√2].
    pub fn is_clifford(self) -> bool {
        matches!(self, Phase::Frac { den: 1 | 2, .. })
    }

    /// `k` with phase `k·π/2`, if Clifford.
    pub fn quarter_turns(self) -> Option<i64> {
        match self {
            Phase::Frac { num, den: 1 } => Some(2 * num),
            Phase::Frac { num, den: 2 } => Some(num),
            _ => None,
        }
    }

    /// `e^{iα}` exactly, for Clifford phases.
    pub fn exact_exp(self) -> Option<ExactScalar> {
        self.quarter_turns().map(ExactScalar::i_pow)
    }

    pub fn exp(self) -> Complex64 {
        if let Some(k) = self.quarter_turns() {
            return [Complex64::new(1.0, 0.0), Complex64::i(), Complex64::new(-1.0, 0.0), -Complex64::i()]
                [k.rem_euclid(4) as usize];
        }
        Complex64::from_polar(1.0, self.to_radians())
    }

    pub fn add(self, o: Phase) -> Phase {
        match (self, o) {
            (Phase::Frac { num: a, den: b }, Phase::Frac { num: c, den: d }) => {
                Phase::frac(a * d + c * b, b * d)
            }
            _ => Phase::Rad { rad: (self.to_radians() + o.to_radians()).rem_euclid(2.0 * PI) },
        }
    }

    pub fn neg(self) -> Phase {
        match self {
            Phase::Frac { num, den } => Phase::frac(-num, den),
            Phase::Rad { rad } => Phase::Rad { rad: -rad },
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Phase::Frac { num: 0, .. } => write!(f, "0"),
            Phase::Frac { num: 1, den: 1 } => write!(f, "π"),
            Phase::Frac { num, den: 1 } => write!(f, "{num}π"),
            Phase::Frac { num: 1, den } => write!(f, "π/{den}"),
            Phase::Frac { num, den } => write!(f, "{num}π/{den}"),
            Phase::Rad { rad } => write!(f, "{rad}"),
        }
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_mod_two_pi() {
        assert_eq!(Phase::frac(3, 1), Phase::pi());
        assert_eq!(Phase::frac(-1, 2), Phase::frac(3, 2));
        assert_eq!(Phase::frac(2, 4), Phase::frac(1, 2));
        assert_eq!(Phase::pi().add(Phase::pi()), Phase::zero());
        assert_eq!(Phase::frac(1, 2).neg(), Phase::frac(3, 2));
        assert!(Phase::frac(1, 2).is_clifford());
        assert!(!Phase::frac(1, 4).is_clifford());
        assert!(!Phase::radians(0.3).is_clifford());
        assert_eq!(Phase::frac(1, 2).exact_exp(), Some(ExactScalar::i()));
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Phase::pi()).unwrap(), r#"{"num":1,"den":1}"#);
        assert_eq!(serde_json::to_string(&Phase::radians(0.5)).unwrap(), r#"{"rad":0.5}"#);
        let p: Phase = serde_json::from_str(r#"{"num":1,"den":2}"#).unwrap();
        assert_eq!(p, Phase::frac(1, 2));
        assert!(serde_json::from_str::<Phase>(r#"{"num":1,"den":2,"x":1}"#).is_err());
    }
}
