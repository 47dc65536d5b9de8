//! Exact arithmetic: the ring Q(i)[√2], finite sums of rational multiples of
//! square roots, and half-integer spins.

mod half;
mod matrix;
mod radical;
mod scalar;

pub use half::{HalfInteger, MagneticIndex};
pub use matrix::Matrix;
pub use radical::{radical_to_float, sqrt_rational, RadicalNumber};
pub use scalar::ExactScalar;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("square root of negative rational {0}")]
    NegativeSqrt(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot divide by multi-term radical {0}")]
    MultiTermDivisor(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// n! as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Splits `n > 0` as `f² · s` with `s` squarefree, returning `(f, s)`.
pub(crate) fn square_part(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut f = BigUint::one();
    let mut s = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1u32;
    }
    s *= rest;
    (f, s)
}

#[cfg(test)]
pub(crate) fn is_squarefree(n: &BigUint) -> bool {
    if n.is_zero() {
        return false;
    }
    square_part(n).0.is_one()
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down huge operands before dividing
            let bits = q.numer().bits().max(q.denom().bits()) as i64 - 1000;
            let shift = bits.max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            if d == 0.0 {
                n.signum() * f64::INFINITY
            } else {
                n / d
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(7), BigUint::from(5040u32));
    }

    #[test]
    fn square_parts() {
        let (f, s) = square_part(&BigUint::from(72u32));
        assert_eq!((f, s), (BigUint::from(6u32), BigUint::from(2u32)));
        let (f, s) = square_part(&BigUint::from(1u32));
        assert_eq!((f, s), (BigUint::from(1u32), BigUint::from(1u32)));
        assert!(is_squarefree(&BigUint::from(30u32)));
        assert!(!is_squarefree(&BigUint::from(12u32)));
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
