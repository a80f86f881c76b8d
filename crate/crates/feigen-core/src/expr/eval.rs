use super::ast::{BinOp, Expr, Func, Param};
use crate::jet::{EvalError, Jet};
use crate::real::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct Bindings<S> {
    pub a: S,
    pub b: S,
}

impl<S: Scalar> Bindings<S> {
    pub fn one(a: S) -> Bindings<S> {
        Bindings { a, b: S::ZERO }
    }

    fn get(&self, p: Param) -> S {
        match p {
            Param::A => self.a,
            Param::B => self.b,
        }
    }
}

fn int_exponent(k: f64) -> Option<i32> {
    let ki = k as i64;
    if ki as f64 == k && ki.unsigned_abs() <= i32::MAX as u64 {
        Some(ki as i32)
    } else {
        None
    }
}

/// Value-only evaluation: same domain rules as the jet path, a quarter of
/// the work. Orbit iteration lives on this.
pub fn eval_value<S: Scalar>(e: &Expr, x: S, params: &Bindings<S>) -> Result<S, EvalError> {
    let v = eval_value_inner(e, x, params)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn eval_value_inner<S: Scalar>(e: &Expr, x: S, params: &Bindings<S>) -> Result<S, EvalError> {
    Ok(match e {
        Expr::Const(c) => S::from_f64(*c),
        Expr::Pi => S::pi(),
        Expr::E => S::e(),
        Expr::X => x,
        Expr::Param(p) => params.get(*p),
        Expr::Neg(inner) => -eval_value_inner(inner, x, params)?,
        Expr::Call(func, inner) => {
            let u = eval_value_inner(inner, x, params)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Exp => u.exp(),
                Func::Ln => {
                    if u.to_f64() <= 0.0 {
                        return Err(EvalError::LogDomain { arg: u.to_f64() });
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u.to_f64() < 0.0 {
                        return Err(EvalError::SqrtDomain { arg: u.to_f64() });
                    }
                    u.sqrt()
                }
                Func::Abs => u.abs(),
            }
        }
        Expr::Bin(op, l, r) => {
            let u = eval_value_inner(l, x, params)?;
            match op {
                BinOp::Add => u + eval_value_inner(r, x, params)?,
                BinOp::Sub => u - eval_value_inner(r, x, params)?,
                BinOp::Mul => u * eval_value_inner(r, x, params)?,
                BinOp::Div => {
                    let v = eval_value_inner(r, x, params)?;
                    if v.to_f64() == 0.0 {
                        return Err(EvalError::DivByZero);
                    }
                    u / v
                }
                BinOp::Pow => {
                    if let Expr::Const(k) = **r {
                        if let Some(n) = int_exponent(k) {
                            if n < 0 && u.to_f64() == 0.0 {
                                return Err(EvalError::DivByZero);
                            }
                            u.powi(n)
                        } else {
                            let u0 = u.to_f64();
                            if u0 < 0.0 {
                                return Err(EvalError::PowDomain {
                                    base: u0,
                                    exponent: k,
                                });
                            }
                            u.powf(S::from_f64(k))
                        }
                    } else {
                        let v = eval_value_inner(r, x, params)?;
                        if u.to_f64() <= 0.0 {
                            return Err(EvalError::PowDomain {
                                base: u.to_f64(),
                                exponent: v.to_f64(),
                            });
                        }
                        u.powf(v)
                    }
                }
            }
        }
    })
}

/// Derivatives up to `order` (0..=3) with respect to x; entries above the
/// requested order are zero. Every entry up to the order must come out
/// finite or the whole evaluation is a fault.
pub fn eval_jet<S: Scalar>(
    e: &Expr,
    x: S,
    params: &Bindings<S>,
    order: u8,
) -> Result<Jet<S>, EvalError> {
    debug_assert!(order <= 3);
    let j = eval_jet_inner(e, x, params, order)?;
    if j.is_finite() {
        Ok(j)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn eval_jet_inner<S: Scalar>(
    e: &Expr,
    x: S,
    params: &Bindings<S>,
    order: u8,
) -> Result<Jet<S>, EvalError> {
    Ok(match e {
        Expr::Const(c) => Jet::constant(S::from_f64(*c)),
        Expr::Pi => Jet::constant(S::pi()),
        Expr::E => Jet::constant(S::e()),
        Expr::X => Jet::variable(x, order),
        Expr::Param(p) => Jet::constant(params.get(*p)),
        Expr::Neg(inner) => eval_jet_inner(inner, x, params, order)?.neg(),
        Expr::Call(func, inner) => {
            let u = eval_jet_inner(inner, x, params, order)?;
            match func {
                Func::Sin => u.sin(order),
                Func::Cos => u.cos(order),
                Func::Exp => u.exp(order),
                Func::Ln => u.ln(order)?,
                Func::Sqrt => u.sqrt(order)?,
                Func::Abs => u.abs(order)?,
            }
        }
        Expr::Bin(op, l, r) => {
            let u = eval_jet_inner(l, x, params, order)?;
            match op {
                BinOp::Add => u.add(eval_jet_inner(r, x, params, order)?),
                BinOp::Sub => u.sub(eval_jet_inner(r, x, params, order)?),
                BinOp::Mul => u.mul(eval_jet_inner(r, x, params, order)?, order),
                BinOp::Div => u.div(eval_jet_inner(r, x, params, order)?, order)?,
                BinOp::Pow => {
                    if let Expr::Const(k) = **r {
                        u.pow_const(k, order)?
                    } else {
                        u.pow_jet(eval_jet_inner(r, x, params, order)?, order)?
                    }
                }
            }
        }
    })
}
