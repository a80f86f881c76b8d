//! Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
//! giving ~31 significant decimal digits. Used to refine cascade events past
//! the depth where double precision runs out of parameter resolution
//! (spacing shrinks by ~4.67x per level, so rank 10+ events differ in the
//! 15th digit).
//!
//! Error-free transforms follow Dekker/Knuth; division and sqrt follow the
//! QD library's accurate variants. Transcendentals use argument reduction
//! plus Taylor sums in dd, accurate to ~1e-30 relative on the ranges the
//! map catalog exercises.

use crate::real::{fma, round, Scalar};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

// requires |a| >= |b|
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, fma(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.5707963267948966,
        lo: 6.123233995736766e-17,
    };
    pub const LN_2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    pub const E: Dd = Dd {
        hi: 2.718281828459045,
        lo: 1.4456468917292502e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        if self.hi < 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // one Karp/Markstein-style correction on the f64 estimate
        let x = 1.0 / Scalar::sqrt(self.hi);
        let ax = self.hi * x;
        let ax_dd = Dd::from_f64(ax);
        let err = self - ax_dd * ax_dd;
        Dd::new(ax, err.hi * (x * 0.5))
    }

    pub fn sqr(self) -> Dd {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }

    pub fn ldexp(self, n: i32) -> Dd {
        let f = pow2(n);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        // e^x = 2^m * e^r, |r| <= ln2/2; then e^r = (e^{r/2^k})^{2^k}
        let m = round(self.hi / core::f64::consts::LN_2);
        let r = self - Dd::LN_2 * Dd::from_f64(m);
        const K: i32 = 9;
        let r = r.ldexp(-K);
        // Taylor: e^r - 1 = r + r^2/2! + ... ; |r| < 7e-4 so 12 terms reach 1e-38
        let mut term = r;
        let mut sum = r;
        for i in 2..=12 {
            term = term * r / Dd::from_f64(i as f64);
            sum = sum + term;
        }
        // undo the scaling: (1+s)^2 - 1 = s^2 + 2s, keeps "minus one" form exact
        for _ in 0..K {
            sum = sum.sqr() + sum.ldexp(1);
        }
        (sum + Dd::ONE).ldexp(m as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // Newton on exp(y) = x, seeded by the f64 log; two steps hit dd precision
        let mut y = Dd::from_f64(Scalar::ln(self.hi));
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn powf(self, e: Dd) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return if e.hi > 0.0 {
                Dd::ZERO
            } else {
                Dd::from_f64(f64::NAN)
            };
        }
        (e * self.ln()).exp()
    }

    pub fn sin(self) -> Dd {
        let (r, quadrant) = reduce_pi_2(self);
        match quadrant {
            0 => sin_taylor(r),
            1 => cos_taylor(r),
            2 => -sin_taylor(r),
            _ => -cos_taylor(r),
        }
    }

    pub fn cos(self) -> Dd {
        let (r, quadrant) = reduce_pi_2(self);
        match quadrant {
            0 => cos_taylor(r),
            1 => -sin_taylor(r),
            2 => -cos_taylor(r),
            _ => sin_taylor(r),
        }
    }
}

fn pow2(n: i32) -> f64 {
    if n >= -1022 && n <= 1023 {
        f64::from_bits(((n + 1023) as u64) << 52)
    } else if n > 1023 {
        f64::INFINITY
    } else {
        0.0
    }
}

// x = k*(pi/2) + r with |r| <= pi/4; returns (r, k mod 4).
// Plain dd reduction: fine for the |x| <~ 1e3 arguments that arise here,
// hopeless near huge multiples of pi, which the domain guard excludes anyway.
fn reduce_pi_2(x: Dd) -> (Dd, u8) {
    let k = round(x.hi / 1.5707963267948966);
    let r = x - Dd::FRAC_PI_2 * Dd::from_f64(k);
    let q = ((k as i64 % 4) + 4) % 4;
    (r, q as u8)
}

fn sin_taylor(r: Dd) -> Dd {
    // sin r = r - r^3/3! + ... ; |r| <= pi/4 needs ~14 odd terms for 1e-32
    let r2 = r.sqr();
    let mut term = r;
    let mut sum = r;
    let mut k = 1.0;
    for _ in 0..14 {
        term = term * r2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        term = -term;
        sum = sum + term;
        k += 2.0;
    }
    sum
}

fn cos_taylor(r: Dd) -> Dd {
    let r2 = r.sqr();
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0.0;
    for _ in 0..14 {
        term = term * r2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        term = -term;
        sum = sum + term;
        k += 2.0;
    }
    sum
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}", self.hi, self.lo)
    }
}

impl Scalar for Dd {
    const ZERO: Self = Dd::ZERO;
    const ONE: Self = Dd::ONE;
    const EPS: f64 = 4.93e-32; // 2^-104

    fn from_f64(v: f64) -> Self {
        Dd::from_f64(v)
    }
    fn to_f64(self) -> f64 {
        self.f64()
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }

    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn sin(self) -> Self {
        Dd::sin(self)
    }
    fn cos(self) -> Self {
        Dd::cos(self)
    }
    fn powf(self, e: Self) -> Self {
        Dd::powf(self, e)
    }

    fn pi() -> Self {
        Dd::PI
    }
    fn e() -> Self {
        Dd::E
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from a 200-bit computation, stored as (hi, lo) pairs
    const EXP_1_25: Dd = Dd {
        hi: 3.4903429574618414,
        lo: -4.604261945372796e-17,
    };
    const EXP_M20_5: Dd = Dd {
        hi: 1.2501528663867426e-9,
        lo: 6.448235878237776e-26,
    };
    const LN_2_5: Dd = Dd {
        hi: 0.9162907318741551,
        lo: -4.141195369011963e-17,
    };
    const LN_1E_8: Dd = Dd {
        hi: -18.420680743952367,
        lo: 1.757527539535928e-15,
    };
    const SIN_1_1: Dd = Dd {
        hi: 0.8912073600614354,
        lo: -3.605930522940284e-17,
    };
    const COS_1_1: Dd = Dd {
        hi: 0.4535961214255773,
        lo: -5.78481191353792e-18,
    };
    const SIN_14_7: Dd = Dd {
        hi: 0.8457468311429343,
        lo: 2.235588474436891e-17,
    };
    const SQRT_2: Dd = Dd {
        hi: 1.4142135623730951,
        lo: -9.667293313452913e-17,
    };
    const SQRT_0_3: Dd = Dd {
        hi: 0.5477225575051661,
        lo: 2.890126723719787e-17,
    };
    const POW_0_7_2_31: Dd = Dd {
        hi: 0.4387089277724948,
        lo: -3.824387961760101e-18,
    };

    fn assert_close(got: Dd, want: Dd, rel: f64) {
        let err = ((got - want).abs() / want.abs()).f64();
        assert!(
            err < rel,
            "got {:?}, want {:?}, rel err {:.3e}",
            got,
            want,
            err
        );
    }

    #[test]
    fn transcendentals_match_reference() {
        assert_close(Dd::from_f64(1.25).exp(), EXP_1_25, 1e-30);
        assert_close(Dd::from_f64(-20.5).exp(), EXP_M20_5, 1e-30);
        assert_close(Dd::from_f64(2.5).ln(), LN_2_5, 1e-30);
        assert_close(Dd::from_f64(1e-8).ln(), LN_1E_8, 1e-30);
        assert_close(Dd::from_f64(1.1).sin(), SIN_1_1, 1e-30);
        assert_close(Dd::from_f64(1.1).cos(), COS_1_1, 1e-30);
        assert_close(Dd::from_f64(14.7).sin(), SIN_14_7, 1e-29);
        assert_close(Dd::from_f64(2.0).sqrt(), SQRT_2, 1e-31);
        assert_close(Dd::from_f64(0.3).sqrt(), SQRT_0_3, 1e-31);
        assert_close(
            Dd::from_f64(0.7).powf(Dd::from_f64(2.31)),
            POW_0_7_2_31,
            1e-30,
        );
    }

    #[test]
    fn keeps_bits_f64_drops() {
        let tiny = 1e-20;
        let x = Dd::ONE + Dd::from_f64(tiny);
        assert_eq!((x - Dd::ONE).f64(), tiny);
        assert_eq!((1.0 + tiny) - 1.0, 0.0);
    }

    #[test]
    fn field_identities() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        assert!(((third * Dd::from_f64(3.0)) - Dd::ONE).abs().f64() < 1e-31);
        let s = Dd::from_f64(2.0).sqrt();
        assert!((s.sqr() - Dd::from_f64(2.0)).abs().f64() < 1e-31);
        assert!((Dd::LN_2.exp() - Dd::from_f64(2.0)).abs().f64() < 1e-30);
        let x = Dd::from_f64(0.37);
        assert!((x.exp().ln() - x).abs().f64() < 1e-30);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = Dd::from_f64(1.3);
        let mut acc = Dd::ONE;
        for _ in 0..7 {
            acc = acc * x;
        }
        assert!((Scalar::powi(x, 7) - acc).abs().f64() < 1e-30);
        assert_eq!(Scalar::powi(x, 0), Dd::ONE);
        assert!((Scalar::powi(x, -2) - Dd::ONE / x.sqr()).abs().f64() < 1e-31);
    }

    #[test]
    fn ordering_uses_both_limbs() {
        let a = Dd::new(1.0, 1e-20);
        let b = Dd::new(1.0, -1e-20);
        assert!(a > b);
        assert!(Dd::from_f64(2.0) > Dd::from_f64(1.0));
    }
}

