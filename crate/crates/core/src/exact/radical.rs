use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{fmt_rational, parse_rational, rational_to_f64, square_part, ExactError};

/// A finite sum `Σ q_s √s` over squarefree radicands `s`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalNumber {
    terms: BTreeMap<BigUint, BigRational>,
}

impl RadicalNumber {
    pub fn from_rational(q: BigRational) -> Self {
        Self::term(q, 1u32)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// `q·√s` for any positive `s`; square factors of `s` are pulled out.
    pub fn term(q: BigRational, s: impl Into<BigUint>) -> Self {
        let s = s.into();
        let mut out = RadicalNumber::default();
        if q.is_zero() || s.is_zero() {
            return out;
        }
        let (f, sf) = square_part(&s);
        out.terms.insert(sf, q * BigRational::from_integer(BigInt::from(f)));
        out
    }

    /// `√s` for a positive integer.
    pub fn sqrt_int(s: u64) -> Self {
        Self::term(BigRational::one(), s)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(q, s)` when the value is a single term `q√s`.
    pub fn single_term(&self) -> Option<(&BigRational, &BigUint)> {
        if self.terms.len() == 1 {
            let (s, q) = self.terms.iter().next().unwrap();
            Some((q, s))
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&BigUint::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> f64 {
        radical_to_float(self)
    }

    /// Sign of the value; exact for single terms, by float otherwise.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some((q, _)) = self.single_term() {
            return if q.is_positive() { 1 } else { -1 };
        }
        if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    /// `x = ±y`.
    pub fn abs_eq(&self, other: &Self) -> bool {
        self == other || *self == -other.clone()
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let (q, s) = match self.single_term() {
            Some(t) => t,
            None if self.is_zero() => return Err(ExactError::DivisionByZero),
            None => return Err(ExactError::MultiTermDivisor(self.to_string())),
        };
        // 1/(q√s) = √s / (q s)
        let sq = BigRational::from_integer(BigInt::from(s.clone()));
        Ok(Self::term((q * sq).recip(), s.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, s: BigUint, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(BigRational::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }
}

/// Exact square root of a nonnegative rational, as `q√s` with `s` squarefree.
pub fn sqrt_rational(p: &BigRational) -> Result<RadicalNumber, ExactError> {
    if p.is_negative() {
        return Err(ExactError::NegativeSqrt(fmt_rational(p)));
    }
    if p.is_zero() {
        return Ok(RadicalNumber::zero());
    }
    // √(a/b) = √(ab)/b
    let a = p.numer().magnitude();
    let b = p.denom().magnitude();
    Ok(RadicalNumber::term(
        BigRational::new(BigInt::one(), BigInt::from(b.clone())),
        a * b,
    ))
}

pub fn radical_to_float(x: &RadicalNumber) -> f64 {
    x.terms
        .iter()
        .map(|(s, q)| {
            let v = sqrt_to_f64(&(q * q * BigRational::from_integer(BigInt::from(s.clone()))));
            if q.is_negative() {
                -v
            } else {
                v
            }
        })
        .sum()
}

/// √x for a positive rational via an integer square root carrying ~80 bits.
fn sqrt_to_f64(x: &BigRational) -> f64 {
    let a = x.numer().magnitude();
    let b = x.denom().magnitude();
    // choose k with a·4^k/b ≥ 2^160
    let k = (160 + b.bits() as i64 - a.bits() as i64).max(0) as u64 / 2 + 1;
    let r = ((a << (2 * k)) / b).sqrt();
    rational_to_f64(&BigRational::new(BigInt::from(r), BigInt::from(BigUint::one() << k)))
}

impl Zero for RadicalNumber {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for RadicalNumber {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl<'a> Add<&'a RadicalNumber> for &'a RadicalNumber {
    type Output = RadicalNumber;
    fn add(self, o: &RadicalNumber) -> RadicalNumber {
        let mut out = self.clone();
        for (s, q) in &o.terms {
            out.add_term(s.clone(), q.clone());
        }
        out
    }
}

impl<'a> Sub<&'a RadicalNumber> for &'a RadicalNumber {
    type Output = RadicalNumber;
    fn sub(self, o: &RadicalNumber) -> RadicalNumber {
        let mut out = self.clone();
        for (s, q) in &o.terms {
            out.add_term(s.clone(), -q.clone());
        }
        out
    }
}

impl<'a> Mul<&'a RadicalNumber> for &'a RadicalNumber {
    type Output = RadicalNumber;
    fn mul(self, o: &RadicalNumber) -> RadicalNumber {
        let mut out = RadicalNumber::zero();
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                // √s√t = g√(st/g²) with g = gcd(s, t) for squarefree s, t
                let g = s.gcd(t);
                let r = (s / &g) * (t / &g);
                let c = a * b * BigRational::from_integer(BigInt::from(g));
                out.add_term(r, c);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RadicalNumber {
            type Output = RadicalNumber;
            fn $f(self, o: RadicalNumber) -> RadicalNumber {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a RadicalNumber> for RadicalNumber {
            type Output = RadicalNumber;
            fn $f(self, o: &RadicalNumber) -> RadicalNumber {
                (&self).$f(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RadicalNumber {
    type Output = RadicalNumber;
    fn neg(mut self) -> RadicalNumber {
        for q in self.terms.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl fmt::Display for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if s.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{}*sqrt({s})", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalNumber({self})")
    }
}

impl FromStr for RadicalNumber {
    type Err = ExactError;

    /// Parses sums such as `1/6`, `-1/3*sqrt(3)`, `sqrt(2) - 3/4*sqrt(5)`.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let bad = || ExactError::Parse(format!("bad radical {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for c in compact.chars() {
            if (c == '+' || c == '-') && !cur.is_empty() && !matches!(prev, Some('*' | '/' | '(')) {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(c);
            prev = Some(c);
        }
        pieces.push(cur);

        let mut out = RadicalNumber::zero();
        for p in pieces {
            let (neg, body) = match p.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, p.strip_prefix('+').unwrap_or(&p)),
            };
            let (coef, rad) = if let Some(i) = body.find("sqrt(") {
                let inner = body[i + 5..].strip_suffix(')').ok_or_else(bad)?;
                let rad: BigUint = inner.parse().map_err(|_| bad())?;
                let coef = match &body[..i] {
                    "" => BigRational::one(),
                    c => parse_rational(c.strip_suffix('*').ok_or_else(bad)?)?,
                };
                (coef, rad)
            } else {
                (parse_rational(body)?, BigUint::one())
            };
            let coef = if neg { -coef } else { coef };
            out = out + RadicalNumber::term(coef, rad);
        }
        Ok(out)
    }
}

impl Serialize for RadicalNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RadicalNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
