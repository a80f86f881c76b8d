//! Order-3 jets: value and first three x-derivatives, propagated exactly
//! (Leibniz / Faà di Bruno, no finite differences). The evaluation order
//! caps how many entries are computed; everything above it stays zero so
//! partially-singular points (e.g. sqrt at 0 probed at order 0) don't
//! manufacture spurious infinities.

use crate::real::Scalar;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<S> {
    pub f: S,
    pub f1: S,
    pub f2: S,
    pub f3: S,
}

pub type Jet3 = Jet<f64>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalError {
    /// ln of a non-positive value
    LogDomain { arg: f64 },
    /// sqrt of a negative value
    SqrtDomain { arg: f64 },
    DivByZero,
    /// negative base with fractional exponent, zero base with dynamic or
    /// negative exponent — anything outside the real pow branch
    PowDomain { base: f64, exponent: f64 },
    /// derivative of abs at its kink
    AbsKink,
    /// an entry overflowed or otherwise left the finite range
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::LogDomain { arg } => write!(f, "ln of non-positive value {arg}"),
            EvalError::SqrtDomain { arg } => write!(f, "sqrt of negative value {arg}"),
            EvalError::DivByZero => write!(f, "division by zero"),
            EvalError::PowDomain { base, exponent } => {
                write!(f, "{base}^{exponent} has no real value")
            }
            EvalError::AbsKink => write!(f, "derivative of abs at 0"),
            EvalError::NonFinite => write!(f, "evaluation overflowed"),
        }
    }
}

impl core::error::Error for EvalError {}

impl<S: Scalar> Jet<S> {
    pub fn constant(v: S) -> Jet<S> {
        Jet {
            f: v,
            f1: S::ZERO,
            f2: S::ZERO,
            f3: S::ZERO,
        }
    }

    pub fn variable(x: S, order: u8) -> Jet<S> {
        Jet {
            f: x,
            f1: if order >= 1 { S::ONE } else { S::ZERO },
            f2: S::ZERO,
            f3: S::ZERO,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.f1.is_finite() && self.f2.is_finite() && self.f3.is_finite()
    }

    pub fn neg(self) -> Jet<S> {
        Jet {
            f: -self.f,
            f1: -self.f1,
            f2: -self.f2,
            f3: -self.f3,
        }
    }

    pub fn add(self, r: Jet<S>) -> Jet<S> {
        Jet {
            f: self.f + r.f,
            f1: self.f1 + r.f1,
            f2: self.f2 + r.f2,
            f3: self.f3 + r.f3,
        }
    }

    pub fn sub(self, r: Jet<S>) -> Jet<S> {
        Jet {
            f: self.f - r.f,
            f1: self.f1 - r.f1,
            f2: self.f2 - r.f2,
            f3: self.f3 - r.f3,
        }
    }

    pub fn mul(self, r: Jet<S>, order: u8) -> Jet<S> {
        let three = S::from_f64(3.0);
        Jet {
            f: self.f * r.f,
            f1: if order >= 1 {
                self.f1 * r.f + self.f * r.f1
            } else {
                S::ZERO
            },
            f2: if order >= 2 {
                self.f2 * r.f + S::from_f64(2.0) * self.f1 * r.f1 + self.f * r.f2
            } else {
                S::ZERO
            },
            f3: if order >= 3 {
                self.f3 * r.f
                    + three * self.f2 * r.f1
                    + three * self.f1 * r.f2
                    + self.f * r.f3
            } else {
                S::ZERO
            },
        }
    }

    /// g(u) with g's derivatives at u.f supplied by the caller.
    fn compose(self, g0: S, g1: S, g2: S, g3: S, order: u8) -> Jet<S> {
        let three = S::from_f64(3.0);
        Jet {
            f: g0,
            f1: if order >= 1 { g1 * self.f1 } else { S::ZERO },
            f2: if order >= 2 {
                g2 * self.f1 * self.f1 + g1 * self.f2
            } else {
                S::ZERO
            },
            f3: if order >= 3 {
                g3 * self.f1 * self.f1 * self.f1
                    + three * g2 * self.f1 * self.f2
                    + g1 * self.f3
            } else {
                S::ZERO
            },
        }
    }

    pub fn div(self, r: Jet<S>, order: u8) -> Result<Jet<S>, EvalError> {
        if r.f.to_f64() == 0.0 {
            return Err(EvalError::DivByZero);
        }
        let inv = S::ONE / r.f;
        let inv2 = inv * inv;
        let recip = r.compose(
            inv,
            -inv2,
            S::from_f64(2.0) * inv2 * inv,
            S::from_f64(-6.0) * inv2 * inv2,
            order,
        );
        Ok(self.mul(recip, order))
    }

    pub fn exp(self, order: u8) -> Jet<S> {
        let e = self.f.exp();
        self.compose(e, e, e, e, order)
    }

    pub fn ln(self, order: u8) -> Result<Jet<S>, EvalError> {
        if self.f.to_f64() <= 0.0 {
            return Err(EvalError::LogDomain {
                arg: self.f.to_f64(),
            });
        }
        let inv = S::ONE / self.f;
        let inv2 = inv * inv;
        Ok(self.compose(
            self.f.ln(),
            inv,
            -inv2,
            S::from_f64(2.0) * inv2 * inv,
            order,
        ))
    }

    pub fn sqrt(self, order: u8) -> Result<Jet<S>, EvalError> {
        if self.f.to_f64() < 0.0 {
            return Err(EvalError::SqrtDomain {
                arg: self.f.to_f64(),
            });
        }
        let s = self.f.sqrt();
        let g1 = S::from_f64(0.5) / s;
        let g2 = S::from_f64(-0.5) * g1 / self.f;
        let g3 = S::from_f64(-1.5) * g2 / self.f;
        Ok(self.compose(s, g1, g2, g3, order))
    }

    pub fn sin(self, order: u8) -> Jet<S> {
        let s = self.f.sin();
        let c = self.f.cos();
        self.compose(s, c, -s, -c, order)
    }

    pub fn cos(self, order: u8) -> Jet<S> {
        let s = self.f.sin();
        let c = self.f.cos();
        self.compose(c, -s, -c, s, order)
    }

    pub fn abs(self, order: u8) -> Result<Jet<S>, EvalError> {
        let v = self.f.to_f64();
        if v == 0.0 && order >= 1 {
            return Err(EvalError::AbsKink);
        }
        if v < 0.0 {
            Ok(self.neg())
        } else {
            Ok(self)
        }
    }

    /// Integer power by squaring on jets; valid for any base. n = 0 gives
    /// the constant 1 (the DSL's only 0^0 = 1 case: a literal exponent).
    pub fn powi(self, n: i32, order: u8) -> Result<Jet<S>, EvalError> {
        let mut acc = Jet::constant(S::ONE);
        let mut base = self;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base, order);
            }
            base = base.mul(base, order);
            k >>= 1;
        }
        if n < 0 {
            Jet::constant(S::ONE).div(acc, order)
        } else {
            Ok(acc)
        }
    }

    /// u^k for a literal exponent k. Integer k goes through `powi`;
    /// fractional k needs u >= 0, with IEEE semantics at u = 0 so that
    /// high-degree terms like x^7.9 keep their (finite, zero) derivatives
    /// and genuinely singular ones surface as NonFinite in the final sweep.
    pub fn pow_const(self, k: f64, order: u8) -> Result<Jet<S>, EvalError> {
        let ki = k as i64;
        if ki as f64 == k && ki.unsigned_abs() <= i32::MAX as u64 {
            return self.powi(ki as i32, order);
        }
        let u0 = self.f.to_f64();
        if u0 < 0.0 {
            return Err(EvalError::PowDomain {
                base: u0,
                exponent: k,
            });
        }
        let kk = S::from_f64(k);
        let g0 = self.f.powf(kk);
        let g1 = kk * self.f.powf(S::from_f64(k - 1.0));
        let g2 = kk * S::from_f64(k - 1.0) * self.f.powf(S::from_f64(k - 2.0));
        let g3 = kk
            * S::from_f64(k - 1.0)
            * S::from_f64(k - 2.0)
            * self.f.powf(S::from_f64(k - 3.0));
        Ok(self.compose(g0, g1, g2, g3, order))
    }

    /// u^v with a live exponent: positive base only, via exp(v ln u).
    pub fn pow_jet(self, v: Jet<S>, order: u8) -> Result<Jet<S>, EvalError> {
        if self.f.to_f64() <= 0.0 {
            return Err(EvalError::PowDomain {
                base: self.f.to_f64(),
                exponent: v.f.to_f64(),
            });
        }
        let lnu = self.ln(order)?;
        Ok(v.mul(lnu, order).exp(order))
    }
}
