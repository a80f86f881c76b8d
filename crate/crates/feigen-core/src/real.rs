//! Scalar abstraction over f64 and double-double so the expression
//! evaluator and jets can run in either precision.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    /// Unit roundoff of the representation, as an f64 (drives generic
    /// stopping tolerances).
    const EPS: f64;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn is_finite(self) -> bool;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn powf(self, e: Self) -> Self;

    // Exponentiation by squaring: total, and the only pow valid for
    // negative bases.
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::ONE / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    fn mul_add(self, b: Self, c: Self) -> Self {
        self * b + c
    }

    fn pi() -> Self;
    fn e() -> Self;
}

#[cfg(feature = "std")]
mod f64_impl {
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    pub fn powf(x: f64, e: f64) -> f64 {
        x.powf(e)
    }
    pub fn fma(a: f64, b: f64, c: f64) -> f64 {
        a.mul_add(b, c)
    }
    pub fn round(x: f64) -> f64 {
        x.round()
    }
}

#[cfg(not(feature = "std"))]
mod f64_impl {
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    pub fn powf(x: f64, e: f64) -> f64 {
        libm::pow(x, e)
    }
    pub fn fma(a: f64, b: f64, c: f64) -> f64 {
        libm::fma(a, b, c)
    }
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
}

pub(crate) fn fma(a: f64, b: f64, c: f64) -> f64 {
    f64_impl::fma(a, b, c)
}

pub(crate) fn round(x: f64) -> f64 {
    f64_impl::round(x)
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EPS: f64 = f64::EPSILON;

    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn abs(self) -> Self {
        f64::from_bits(self.to_bits() & !(1u64 << 63))
    }
    fn sqrt(self) -> Self {
        f64_impl::sqrt(self)
    }
    fn exp(self) -> Self {
        f64_impl::exp(self)
    }
    fn ln(self) -> Self {
        f64_impl::ln(self)
    }
    fn sin(self) -> Self {
        f64_impl::sin(self)
    }
    fn cos(self) -> Self {
        f64_impl::cos(self)
    }
    fn powf(self, e: Self) -> Self {
        f64_impl::powf(self, e)
    }
    fn mul_add(self, b: Self, c: Self) -> Self {
        f64_impl::fma(self, b, c)
    }

    fn pi() -> Self {
        core::f64::consts::PI
    }
    fn e() -> Self {
        core::f64::consts::E
    }
}
