use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{fmt_rational, parse_rational, rational_to_f64, ExactError, RadicalNumber};

/// An element `(a + b√2) + i(c + d√2)` of Q(i)[√2].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re_rat: BigRational,
    re_sqrt2: BigRational,
    im_rat: BigRational,
    im_sqrt2: BigRational,
}

/// `r + s√2` in double precision without cancellation between the terms.
fn qsqrt2_to_f64(r: &BigRational, s: &BigRational) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    let (rf, sf) = (rational_to_f64(r), rational_to_f64(s));
    if r.is_zero() || s.is_zero() || (rf > 0.0) == (sf > 0.0) {
        return rf + sf * s2;
    }
    let norm = r * r - s * s * q(2);
    rational_to_f64(&norm) / (rf - sf * s2)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ExactScalar {
    pub fn new(
        re_rat: BigRational,
        re_sqrt2: BigRational,
        im_rat: BigRational,
        im_sqrt2: BigRational,
    ) -> Self {
        ExactScalar { re_rat, re_sqrt2, im_rat, im_sqrt2 }
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar { re_rat: r, ..Default::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    /// `n/d` as a scalar. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt2() -> Self {
        ExactScalar { re_sqrt2: q(1), ..Default::default() }
    }

    pub fn i() -> Self {
        ExactScalar { im_rat: q(1), ..Default::default() }
    }

    /// `(√2)^k` for any integer `k`.
    pub fn sqrt2_pow(k: i64) -> Self {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let two = BigInt::from(2);
        let p = if half >= 0 {
            BigRational::from_integer(num_traits::pow(two, half as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(two, (-half) as usize))
        };
        if odd {
            ExactScalar { re_sqrt2: p, ..Default::default() }
        } else {
            Self::from_rational(p)
        }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn re_rat(&self) -> &BigRational {
        &self.re_rat
    }
    pub fn re_sqrt2(&self) -> &BigRational {
        &self.re_sqrt2
    }
    pub fn im_rat(&self) -> &BigRational {
        &self.im_rat
    }
    pub fn im_sqrt2(&self) -> &BigRational {
        &self.im_sqrt2
    }

    pub fn is_real(&self) -> bool {
        self.im_rat.is_zero() && self.im_sqrt2.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re_rat: self.re_rat.clone(),
            re_sqrt2: self.re_sqrt2.clone(),
            im_rat: -self.im_rat.clone(),
            im_sqrt2: -self.im_sqrt2.clone(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            qsqrt2_to_f64(&self.re_rat, &self.re_sqrt2),
            qsqrt2_to_f64(&self.im_rat, &self.im_sqrt2),
        )
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // |z|² = p + r√2, then 1/(p + r√2) = (p - r√2)/(p² - 2r²)
        let n = self * &self.conj();
        let (p, r) = (n.re_rat, n.re_sqrt2);
        let d = &p * &p - &r * &r * q(2);
        let inv_norm = ExactScalar {
            re_rat: &p / &d,
            re_sqrt2: -(&r / &d),
            ..Default::default()
        };
        Ok(&self.conj() * &inv_norm)
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

    /// Real value as a radical sum, if the imaginary part vanishes.
    pub fn to_radical(&self) -> Option<RadicalNumber> {
        if !self.is_real() {
            return None;
        }
        Some(
            RadicalNumber::from_rational(self.re_rat.clone())
                + RadicalNumber::term(self.re_sqrt2.clone(), 2u32),
        )
    }

    /// Human-oriented rendering: radical form for reals, `re + im*i` otherwise.
    pub fn pretty(&self) -> String {
        let re = RadicalNumber::from_rational(self.re_rat.clone())
            + RadicalNumber::term(self.re_sqrt2.clone(), 2u32);
        if self.is_real() {
            return re.to_string();
        }
        let im = RadicalNumber::from_rational(self.im_rat.clone())
            + RadicalNumber::term(self.im_sqrt2.clone(), 2u32);
        if re.is_zero() {
            format!("({im})*i")
        } else {
            format!("{re} + ({im})*i")
        }
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re_rat.is_zero()
            && self.re_sqrt2.is_zero()
            && self.im_rat.is_zero()
            && self.im_sqrt2.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re_rat: &self.re_rat + &o.re_rat,
            re_sqrt2: &self.re_sqrt2 + &o.re_sqrt2,
            im_rat: &self.im_rat + &o.im_rat,
            im_sqrt2: &self.im_sqrt2 + &o.im_sqrt2,
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re_rat: &self.re_rat - &o.re_rat,
            re_sqrt2: &self.re_sqrt2 - &o.re_sqrt2,
            im_rat: &self.im_rat - &o.im_rat,
            im_sqrt2: &self.im_sqrt2 - &o.im_sqrt2,
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        // (x1 + i y1)(x2 + i y2) with x, y in Q(√2)
        let two = q(2);
        let m = |a: &BigRational, b: &BigRational, c: &BigRational, d: &BigRational| {
            (a * c + b * d * &two, a * d + b * c)
        };
        let (xx0, xx1) = m(&self.re_rat, &self.re_sqrt2, &o.re_rat, &o.re_sqrt2);
        let (yy0, yy1) = m(&self.im_rat, &self.im_sqrt2, &o.im_rat, &o.im_sqrt2);
        let (xy0, xy1) = m(&self.re_rat, &self.re_sqrt2, &o.im_rat, &o.im_sqrt2);
        let (yx0, yx1) = m(&self.im_rat, &self.im_sqrt2, &o.re_rat, &o.re_sqrt2);
        ExactScalar {
            re_rat: xx0 - yy0,
            re_sqrt2: xx1 - yy1,
            im_rat: xy0 + yx0,
            im_sqrt2: xy1 + yx1,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $f(self, o: ExactScalar) -> ExactScalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $f(self, o: &ExactScalar) -> ExactScalar {
                (&self).$f(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Div for ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; use [`ExactScalar::checked_div`] otherwise.
    fn div(self, o: ExactScalar) -> ExactScalar {
        self.checked_div(&o).expect("division by zero")
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re_rat: -self.re_rat,
            re_sqrt2: -self.re_sqrt2,
            im_rat: -self.im_rat,
            im_sqrt2: -self.im_sqrt2,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -self.clone()
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        *self = &*self + o;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, o: &ExactScalar) {
        *self = &*self * o;
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*r2 + ({} + {}*r2)*i",
            fmt_rational(&self.re_rat),
            fmt_rational(&self.re_sqrt2),
            fmt_rational(&self.im_rat),
            fmt_rational(&self.im_sqrt2)
        )
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

impl FromStr for ExactScalar {
    type Err = ExactError;

    /// Parses the canonical form `a/b + c/d*r2 + (e/f + g/h*r2)*i`.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let bad = || ExactError::Parse(format!("bad scalar {s:?}"));
        let t = s.trim();
        let body = t.strip_suffix(")*i").ok_or_else(bad)?;
        let (re, im) = body.split_once(" + (").ok_or_else(bad)?;
        let pair = |part: &str| -> Result<(BigRational, BigRational), ExactError> {
            let (a, b) = part.split_once(" + ").ok_or_else(bad)?;
            let b = b.trim().strip_suffix("*r2").ok_or_else(bad)?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        };
        let (re_rat, re_sqrt2) = pair(re)?;
        let (im_rat, im_sqrt2) = pair(im)?;
        Ok(ExactScalar { re_rat, re_sqrt2, im_rat, im_sqrt2 })
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (arb_rat(), arb_rat(), arb_rat(), arb_rat())
            .prop_map(|(a, b, c, d)| ExactScalar::new(a, b, c, d))
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &s, ExactScalar::from_int(2));
        assert_eq!(s.inverse().unwrap(), ExactScalar::new(q(0), BigRational::new(1.into(), 2.into()), q(0), q(0)));
        assert_eq!(ExactScalar::sqrt2_pow(5), ExactScalar::new(q(0), q(4), q(0), q(0)));
        assert_eq!(ExactScalar::sqrt2_pow(-2), ExactScalar::ratio(1, 2));
        assert_eq!(&ExactScalar::i() * &ExactScalar::i(), -ExactScalar::one());
    }

    #[test]
    fn canonical_text() {
        let x = ExactScalar::new(
            BigRational::new(1.into(), 2.into()),
            q(-3),
            q(0),
            BigRational::new(7.into(), 5.into()),
        );
        assert_eq!(x.to_string(), "1/2 + -3*r2 + (0 + 7/5*r2)*i");
        assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
        assert!("1 + 2".parse::<ExactScalar>().is_err());
        assert_eq!(ExactScalar::sqrt2_pow(5).pretty(), "4*sqrt(2)");
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(ExactScalar::zero().inverse(), Err(ExactError::DivisionByZero));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &ExactScalar::one(), a.clone());
            prop_assert_eq!(&a + &ExactScalar::zero(), a.clone());
        }

        #[test]
        fn division_inverts(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }

        #[test]
        fn text_round_trip(a in arb_scalar()) {
            prop_assert_eq!(a.to_string().parse::<ExactScalar>().unwrap(), a);
        }

        #[test]
        fn float_product_consistent(a in arb_scalar(), b in arb_scalar()) {
            let lhs = (&a * &b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            let bound = 8.0 * f64::EPSILON * a.to_complex().norm() * b.to_complex().norm();
            prop_assert!((lhs - rhs).norm() <= bound);
        }
    }
}
