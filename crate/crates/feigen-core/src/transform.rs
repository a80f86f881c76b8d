//! Ways of wrapping a parameter around a fixed base map, plus parameter
//! reparameterizations. Each transform rewrites the expression tree, so
//! the result is an ordinary `MapFamily` usable everywhere.

use crate::expr::{BinOp, Expr, Func, Param};
use crate::family::{Body, Domain, MapFamily, Orientation};
use alloc::boxed::Box;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// a·F(x)
    OuterScale,
    /// F(a·x)
    InnerScale,
    /// F(x) + a
    OuterShift,
    /// F(x + a)
    InnerShift,
    /// F(x)^a
    OuterPow,
    /// F(x^a)
    InnerPow,
    /// c^(−a·F(x)), c > 1
    ExpOuter,
    /// c^(−F(x^a)), c > 1
    ExpInner,
    /// (1 − F(x))^a
    OneMinusOuter,
    /// 1 − F(x^a)
    OneMinusInner,
    /// x → 1 / F(1/x), swapping [1,∞) and [0,1]
    ReciprocalConjugate,
    /// −ln(a·F(x)) / ln(G(x))², decreasing parameter
    LogRatioOne,
    /// −ln(F(x)) / ln(a·G(x))², increasing parameter
    LogRatioTwo,
    /// form of LogRatioOne with a valley-shaped F (F(0)=F(1)=1)
    LogRatioThree,
    /// form of LogRatioTwo with a valley-shaped F
    LogRatioFour,
    /// substitute a → θ(a) in an existing family
    ThetaReparam,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::OuterScale => "outer_scale",
            TransformKind::InnerScale => "inner_scale",
            TransformKind::OuterShift => "outer_shift",
            TransformKind::InnerShift => "inner_shift",
            TransformKind::OuterPow => "outer_pow",
            TransformKind::InnerPow => "inner_pow",
            TransformKind::ExpOuter => "exp_outer",
            TransformKind::ExpInner => "exp_inner",
            TransformKind::OneMinusOuter => "one_minus_outer",
            TransformKind::OneMinusInner => "one_minus_inner",
            TransformKind::ReciprocalConjugate => "reciprocal_conjugate",
            TransformKind::LogRatioOne => "log_ratio_1",
            TransformKind::LogRatioTwo => "log_ratio_2",
            TransformKind::LogRatioThree => "log_ratio_3",
            TransformKind::LogRatioFour => "log_ratio_4",
            TransformKind::ThetaReparam => "theta_reparam",
        }
    }

    pub fn from_name(name: &str) -> Option<TransformKind> {
        use TransformKind::*;
        Some(match name {
            "outer_scale" => OuterScale,
            "inner_scale" => InnerScale,
            "outer_shift" => OuterShift,
            "inner_shift" => InnerShift,
            "outer_pow" => OuterPow,
            "inner_pow" => InnerPow,
            "exp_outer" => ExpOuter,
            "exp_inner" => ExpInner,
            "one_minus_outer" => OneMinusOuter,
            "one_minus_inner" => OneMinusInner,
            "reciprocal_conjugate" => ReciprocalConjugate,
            "log_ratio_1" => LogRatioOne,
            "log_ratio_2" => LogRatioTwo,
            "log_ratio_3" => LogRatioThree,
            "log_ratio_4" => LogRatioFour,
            "theta_reparam" => ThetaReparam,
            // `identity` is accepted by the suite layer, not here
            _ => return None,
        })
    }

    fn introduces_param(self) -> bool {
        !matches!(
            self,
            TransformKind::ReciprocalConjugate | TransformKind::ThetaReparam
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct TransformExtras {
    /// base of the exponential for exp_outer/exp_inner
    pub c: Option<f64>,
    /// reparameterization θ(a), written in `a`
    pub theta: Option<Expr>,
    /// second fixed map G for the log-ratio forms
    pub second: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TransformError {
    /// transform needs a plain expression body
    SplitBody,
    /// the base already uses the parameter this transform introduces
    ParamTaken,
    /// theta_reparam needs a family that actually uses `a`
    NoParamToReparam,
    MissingExtra(&'static str),
    /// exp transforms need c > 1
    BadBase(f64),
    /// reciprocal conjugation needs [1,∞)-like or (0,1]-like domain
    DomainShape,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::SplitBody => write!(f, "transform needs an expression body"),
            TransformError::ParamTaken => {
                write!(f, "base already uses the parameter the transform introduces")
            }
            TransformError::NoParamToReparam => {
                write!(f, "theta_reparam needs a family using parameter a")
            }
            TransformError::MissingExtra(what) => write!(f, "transform needs {what}"),
            TransformError::BadBase(c) => write!(f, "exponential base must exceed 1, got {c}"),
            TransformError::DomainShape => {
                write!(f, "reciprocal conjugation needs a [lo,inf) or (0,hi] domain")
            }
        }
    }
}

impl core::error::Error for TransformError {}

fn expr_of(family: &MapFamily) -> Result<&Expr, TransformError> {
    match &family.body {
        Body::Dsl(e) => Ok(e),
        Body::SplitPow { .. } => Err(TransformError::SplitBody),
    }
}

fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
    Expr::Bin(op, Box::new(l), Box::new(r))
}

fn with_expr(expr: Expr, domain: Domain, orientation: Orientation) -> MapFamily {
    MapFamily::from_expr(expr, domain, orientation)
}

/// x^a with the parameter as exponent.
fn x_to_a() -> Expr {
    bin(BinOp::Pow, Expr::X, Expr::Param(Param::A))
}

pub fn transform(
    family: &MapFamily,
    kind: TransformKind,
    extras: &TransformExtras,
) -> Result<MapFamily, TransformError> {
    use TransformKind::*;
    if kind.introduces_param() {
        let f = expr_of(family)?;
        if f.uses_param(Param::A) {
            return Err(TransformError::ParamTaken);
        }
    }
    let a = Expr::Param(Param::A);
    let domain = family.domain;
    let orientation = family.orientation;
    let out = match kind {
        OuterScale => {
            let f = expr_of(family)?.clone();
            with_expr(bin(BinOp::Mul, a, f), domain, orientation)
        }
        InnerScale => {
            let f = expr_of(family)?.clone();
            let inner = bin(BinOp::Mul, a, Expr::X);
            with_expr(f.substitute_x(&inner), domain, orientation)
        }
        OuterShift => {
            let f = expr_of(family)?.clone();
            with_expr(bin(BinOp::Add, f, a), domain, orientation)
        }
        InnerShift => {
            let f = expr_of(family)?.clone();
            let inner = bin(BinOp::Add, Expr::X, a);
            with_expr(f.substitute_x(&inner), domain, orientation)
        }
        OuterPow => {
            let f = expr_of(family)?.clone();
            with_expr(bin(BinOp::Pow, f, a), domain, orientation)
        }
        InnerPow => {
            let f = expr_of(family)?.clone();
            with_expr(f.substitute_x(&x_to_a()), domain, orientation)
        }
        ExpOuter => {
            let c = extras.c.ok_or(TransformError::MissingExtra("c"))?;
            if !(c > 1.0) {
                return Err(TransformError::BadBase(c));
            }
            let f = expr_of(family)?.clone();
            let exponent = Expr::Neg(Box::new(bin(BinOp::Mul, a, f)));
            with_expr(bin(BinOp::Pow, Expr::Const(c), exponent),
                domain,
                orientation,
            )
        }
        ExpInner => {
            let c = extras.c.ok_or(TransformError::MissingExtra("c"))?;
            if !(c > 1.0) {
                return Err(TransformError::BadBase(c));
            }
            let f = expr_of(family)?.clone();
            let exponent = Expr::Neg(Box::new(f.substitute_x(&x_to_a())));
            with_expr(bin(BinOp::Pow, Expr::Const(c), exponent),
                domain,
                orientation,
            )
        }
        OneMinusOuter => {
            let f = expr_of(family)?.clone();
            let body = bin(BinOp::Sub, Expr::Const(1.0), f);
            with_expr(bin(BinOp::Pow, body, a), domain, orientation)
        }
        OneMinusInner => {
            let f = expr_of(family)?.clone();
            let body = f.substitute_x(&x_to_a());
            with_expr(bin(BinOp::Sub, Expr::Const(1.0), body),
                domain,
                orientation,
            )
        }
        ReciprocalConjugate => {
            let f = expr_of(family)?.clone();
            let new_domain = match domain {
                Domain::SemiLine(lo) if lo > 0.0 => Domain::Interval(0.0, 1.0 / lo),
                Domain::Interval(lo, hi) if lo == 0.0 && hi > 0.0 => Domain::SemiLine(1.0 / hi),
                _ => return Err(TransformError::DomainShape),
            };
            let inv_x = bin(BinOp::Div, Expr::Const(1.0), Expr::X);
            let inner = f.substitute_x(&inv_x);
            with_expr(bin(BinOp::Div, Expr::Const(1.0), inner),
                new_domain,
                orientation,
            )
        }
        LogRatioOne | LogRatioTwo | LogRatioThree | LogRatioFour => {
            let f = expr_of(family)?.clone();
            let g = extras
                .second
                .clone()
                .ok_or(TransformError::MissingExtra("a second map g"))?;
            if g.uses_param(Param::A) || g.uses_param(Param::B) {
                return Err(TransformError::ParamTaken);
            }
            let decreasing = matches!(kind, LogRatioOne | LogRatioThree);
            let (num_arg, den_arg) = if decreasing {
                (bin(BinOp::Mul, a, f), g)
            } else {
                (f, bin(BinOp::Mul, a, g))
            };
            let num = Expr::Call(Func::Ln, Box::new(num_arg));
            let den = bin(
                BinOp::Pow,
                Expr::Call(Func::Ln, Box::new(den_arg)),
                Expr::Const(2.0),
            );
            let body = Expr::Neg(Box::new(bin(BinOp::Div, num, den)));
            let orient = if decreasing {
                Orientation::Decreasing
            } else {
                Orientation::Increasing
            };
            with_expr(body, Domain::Interval(0.0, 1.0), orient)
        }
        ThetaReparam => {
            let f = expr_of(family)?;
            if !family.uses_a {
                return Err(TransformError::NoParamToReparam);
            }
            let theta = extras
                .theta
                .clone()
                .ok_or(TransformError::MissingExtra("theta"))?;
            // θ is written in a; x or b inside θ would change the map shape
            let theta_in_a = theta;
            with_expr(f.substitute_param(Param::A, &theta_in_a), domain, orientation)
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Bindings};
    use crate::family::parse_base;

    fn base_hump() -> MapFamily {
        parse_base("x*(1-x)", Domain::Interval(0.0, 1.0)).unwrap()
    }

    #[test]
    fn outer_transforms_at_neutral_parameter_reproduce_the_base() {
        let base = base_hump();
        let scaled = transform(&base, TransformKind::OuterScale, &Default::default()).unwrap();
        let shifted = transform(&base, TransformKind::OuterShift, &Default::default()).unwrap();
        let powered = transform(&base, TransformKind::OuterPow, &Default::default()).unwrap();
        let inner = transform(&base, TransformKind::InnerScale, &Default::default()).unwrap();
        let inner_pow = transform(&base, TransformKind::InnerPow, &Default::default()).unwrap();
        for i in 0..=50 {
            let x = 0.02 * i as f64;
            let v0 = base.eval(x, &Bindings::one(0.0_f64)).unwrap();
            assert_eq!(scaled.eval(x, &Bindings::one(1.0)).unwrap(), v0);
            assert_eq!(shifted.eval(x, &Bindings::one(0.0)).unwrap(), v0);
            assert_eq!(inner.eval(x, &Bindings::one(1.0)).unwrap(), v0);
            if x > 0.0 && v0 > 0.0 {
                assert!((powered.eval(x, &Bindings::one(1.0)).unwrap() - v0).abs() <= 1e-16);
                assert!((inner_pow.eval(x, &Bindings::one(1.0)).unwrap() - v0).abs() <= 1e-16);
            }
        }
    }

    #[test]
    fn reciprocal_conjugate_swaps_domains_and_is_an_involution() {
        let fam = crate::family::parse_family(
            "x^(a/x)",
            Domain::SemiLine(1.0),
            Orientation::Increasing,
        )
        .unwrap();
        let rc = transform(&fam, TransformKind::ReciprocalConjugate, &Default::default())
            .unwrap();
        assert_eq!(rc.domain, Domain::Interval(0.0, 1.0));
        let back = transform(&rc, TransformKind::ReciprocalConjugate, &Default::default())
            .unwrap();
        assert_eq!(back.domain, Domain::SemiLine(1.0));
        let p = Bindings::one(8.0_f64);
        for i in 1..=100 {
            let x = 1.0 + 0.39 * i as f64;
            let v = fam.eval(x, &p).unwrap();
            let w = back.eval(x, &p).unwrap();
            assert!(
                (v - w).abs() <= 1e-12 * v.abs().max(1.0),
                "x={x}: {v} vs {w}"
            );
        }
        // and the conjugate itself matches the closed form x^(a x) on (0,1]
        let closed = parse("x^(a*x)").unwrap();
        for i in 1..=40 {
            let x = 0.024 * i as f64;
            let v = rc.eval(x, &p).unwrap();
            let w = crate::expr::eval_value(&closed, x, &p).unwrap();
            assert!((v - w).abs() <= 1e-12 * w.abs().max(1.0));
        }
    }

    #[test]
    fn exp_transforms_validate_their_base() {
        let base = base_hump();
        let mut extras = TransformExtras::default();
        assert_eq!(
            transform(&base, TransformKind::ExpOuter, &extras).unwrap_err(),
            TransformError::MissingExtra("c")
        );
        extras.c = Some(1.0);
        assert_eq!(
            transform(&base, TransformKind::ExpOuter, &extras).unwrap_err(),
            TransformError::BadBase(1.0)
        );
        extras.c = Some(core::f64::consts::E);
        let fam = transform(&base, TransformKind::ExpOuter, &extras).unwrap();
        // e^(-a·x(1-x)) at a=2, x=0.5: e^(-0.5)
        let v = fam.eval(0.5, &Bindings::one(2.0_f64)).unwrap();
        assert!((v - (-0.5_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn log_ratio_orientation_and_shape() {
        let f = parse_base("4*x*(1-x)", Domain::Interval(0.0, 1.0)).unwrap();
        let g = parse("4*x*(1-x)").unwrap();
        let extras = TransformExtras {
            second: Some(g),
            ..Default::default()
        };
        let one = transform(&f, TransformKind::LogRatioOne, &extras).unwrap();
        let two = transform(&f, TransformKind::LogRatioTwo, &extras).unwrap();
        assert_eq!(one.orientation, Orientation::Decreasing);
        assert_eq!(two.orientation, Orientation::Increasing);
        // -ln(a·F)/ln(F)² at x=0.2, a=0.5: F=0.64
        let fx: f64 = 0.64;
        let expect = -(0.5 * fx).ln() / (fx.ln() * fx.ln());
        let v = one.eval(0.2, &Bindings::one(0.5_f64)).unwrap();
        assert!((v - expect).abs() < 1e-14, "{v} vs {expect}");
    }

    #[test]
    fn theta_reparam_rewrites_the_parameter() {
        let fam = crate::family::parse_family(
            "a*x*(1-x)",
            Domain::Interval(0.0, 1.0),
            Orientation::Increasing,
        )
        .unwrap();
        let extras = TransformExtras {
            theta: Some(parse("a^3").unwrap()),
            ..Default::default()
        };
        let re = transform(&fam, TransformKind::ThetaReparam, &extras).unwrap();
        let v = re.eval(0.5, &Bindings::one(1.5_f64)).unwrap();
        assert!((v - 3.375 * 0.25).abs() < 1e-15);
        // double parameter introduction is rejected
        assert_eq!(
            transform(&fam, TransformKind::OuterScale, &Default::default()).unwrap_err(),
            TransformError::ParamTaken
        );
    }
}
