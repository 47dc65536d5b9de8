//! Entry types for dense contraction: floats, and integers of Z[i][√2]
//! with overflow detection so the exact path can widen on demand.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub(crate) trait Elem: Clone + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self + a·b`, or `None` on overflow.
    fn fma(&self, a: &Self, b: &Self) -> Option<Self>;
    fn checked_add(&self, o: &Self) -> Option<Self>;
}

impl Elem for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    #[inline]
    fn fma(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self + a * b)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
}

pub(crate) trait Int: Clone + Send + Sync + PartialEq + 'static {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    /// Nonnegative gcd.
    fn gcd(&self, o: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn is_even(&self) -> bool;
    fn div_exact(&self, g: &Self) -> Self;
}

impl Int for i64 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    #[inline]
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    #[inline]
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_even(&self) -> bool {
        *self % 2 == 0
    }
    fn div_exact(&self, g: &Self) -> Self {
        *self / *g
    }
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    #[inline]
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    #[inline]
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_even(&self) -> bool {
        *self % 2 == 0
    }
    fn div_exact(&self, g: &Self) -> Self {
        *self / *g
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn is_even(&self) -> bool {
        Integer::is_even(self)
    }
    fn div_exact(&self, g: &Self) -> Self {
        self / g
    }
}

/// `(a + b√2) + i(c + d√2)` with integer components.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Zc<I> {
    pub a: I,
    pub b: I,
    pub c: I,
    pub d: I,
}

impl<I: Int> Zc<I> {
    pub fn new(a: I, b: I, c: I, d: I) -> Self {
        Zc { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Zc::new(I::from_i64(a), I::from_i64(b), I::from_i64(c), I::from_i64(d))
    }

    #[inline]
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        // (p + q√2)(r + s√2) = (pr + 2qs) + (ps + qr)√2
        let two = I::from_i64(2);
        let m = |p: &I, q: &I, r: &I, s: &I| -> Option<(I, I)> {
            let x = p.mul(r)?.add(&q.mul(s)?.mul(&two)?)?;
            let y = p.mul(s)?.add(&q.mul(r)?)?;
            Some((x, y))
        };
        let (xx0, xx1) = m(&self.a, &self.b, &o.a, &o.b)?;
        if self.c.is_zero() && self.d.is_zero() && o.c.is_zero() && o.d.is_zero() {
            return Some(Zc::new(xx0, xx1, I::zero(), I::zero()));
        }
        let (yy0, yy1) = m(&self.c, &self.d, &o.c, &o.d)?;
        let (xy0, xy1) = m(&self.a, &self.b, &o.c, &o.d)?;
        let (yx0, yx1) = m(&self.c, &self.d, &o.a, &o.b)?;
        Some(Zc::new(xx0.sub(&yy0)?, xx1.sub(&yy1)?, xy0.add(&yx0)?, xy1.add(&yx1)?))
    }

    pub fn widen<J: Int>(&self, f: impl Fn(&I) -> J) -> Zc<J> {
        Zc::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }

    pub fn to_big(&self) -> Zc<BigInt> {
        self.widen(|x| x.to_big())
    }
}

impl<I: Int> Elem for Zc<I> {
    fn zero() -> Self {
        Zc::new(I::zero(), I::zero(), I::zero(), I::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
    #[inline]
    fn fma(&self, x: &Self, y: &Self) -> Option<Self> {
        let p = x.checked_mul(y)?;
        self.checked_add(&p)
    }
    #[inline]
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(Zc::new(self.a.add(&o.a)?, self.b.add(&o.b)?, self.c.add(&o.c)?, self.d.add(&o.d)?))
    }
}

impl<I: Int> Zc<I> {
    /// gcd of the four components (0 for zero).
    pub fn content(&self) -> I {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    pub fn div_exact(&self, g: &I) -> Self {
        Zc::new(self.a.div_exact(g), self.b.div_exact(g), self.c.div_exact(g), self.d.div_exact(g))
    }

    /// Both rational components even, so `self = √2·z` for integral `z`.
    pub fn sqrt2_divisible(&self) -> bool {
        self.a.is_even() && self.c.is_even()
    }

    /// `self/√2`, assuming [`Zc::sqrt2_divisible`].
    pub fn div_sqrt2(&self) -> Self {
        let two = I::from_i64(2);
        Zc::new(self.b.clone(), self.a.div_exact(&two), self.d.clone(), self.c.div_exact(&two))
    }
}

impl Zc<BigInt> {
    pub fn to_i64(&self) -> Option<Zc<i64>> {
        Some(Zc::new(self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?))
    }

    pub fn to_i128(&self) -> Option<Zc<i128>> {
        Some(Zc::new(self.a.to_i128()?, self.b.to_i128()?, self.c.to_i128()?, self.d.to_i128()?))
    }
}
