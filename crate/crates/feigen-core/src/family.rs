//! Map families: an expression body (or a piecewise power body) plus the
//! domain it acts on and the direction its cascade advances in.

use crate::expr::{eval_jet, eval_value, parse, Bindings, Expr, Param, ParseError};
use crate::jet::{EvalError, Jet};
use crate::real::Scalar;
use core::fmt;

/// Iterates past this magnitude count as escaped on unbounded domains.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// Boundary inset for seeds, so endpoint-singular maps (x^x at 0, 1/x at
/// the origin) stay evaluable.
pub const SEED_INSET: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Dsl(Expr),
    /// 1 − a·|x|^n with independent exponents left and right of 0; the
    /// kink itself takes the right branch.
    SplitPow { n_left: f64, n_right: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// closed [lo, hi]
    Interval(f64, f64),
    /// [lo, +inf)
    SemiLine(f64),
    Real,
}

impl Domain {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::Interval(lo, hi) => x >= lo && x <= hi,
            Domain::SemiLine(lo) => x >= lo && x <= OVERFLOW_GUARD,
            Domain::Real => x.abs() <= OVERFLOW_GUARD,
        }
    }

    pub fn clamp_interior(self, x: f64) -> f64 {
        match self {
            Domain::Interval(lo, hi) => x.max(lo + SEED_INSET).min(hi - SEED_INSET),
            Domain::SemiLine(lo) => x.max(lo + SEED_INSET),
            Domain::Real => x,
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Domain::Interval(..))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

/// A one- or two-parameter map family. The parameters are always named
/// `a` and `b`; zero-parameter bases are permitted only as transform
/// inputs (see `parse_base`).
#[derive(Clone, Debug, PartialEq)]
pub struct MapFamily {
    pub body: Body,
    pub uses_a: bool,
    pub uses_b: bool,
    pub domain: Domain,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyError {
    Parse(ParseError),
    /// the expression mentions neither a nor b
    NoParameters,
    EmptyDomain,
    /// a semi-line must start at a non-negative abscissa
    NegativeSemiLine,
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::Parse(e) => write!(f, "{e}"),
            FamilyError::NoParameters => write!(f, "expression uses no parameter (a or b)"),
            FamilyError::EmptyDomain => write!(f, "domain interval is empty"),
            FamilyError::NegativeSemiLine => write!(f, "semi-line domain must start at lo >= 0"),
        }
    }
}

impl core::error::Error for FamilyError {}

impl From<ParseError> for FamilyError {
    fn from(e: ParseError) -> Self {
        FamilyError::Parse(e)
    }
}

fn check_domain(domain: Domain) -> Result<(), FamilyError> {
    match domain {
        Domain::Interval(lo, hi) if !(lo < hi) => Err(FamilyError::EmptyDomain),
        Domain::SemiLine(lo) if lo < 0.0 => Err(FamilyError::NegativeSemiLine),
        _ => Ok(()),
    }
}

/// Parse a parameterized family; rejects sources with no `a`/`b`.
pub fn parse_family(
    text: &str,
    domain: Domain,
    orientation: Orientation,
) -> Result<MapFamily, FamilyError> {
    check_domain(domain)?;
    let expr = parse(text)?;
    let uses_a = expr.uses_param(Param::A);
    let uses_b = expr.uses_param(Param::B);
    if !uses_a && !uses_b {
        return Err(FamilyError::NoParameters);
    }
    Ok(MapFamily {
        body: Body::Dsl(expr),
        uses_a,
        uses_b,
        domain,
        orientation,
    })
}

/// Parse a fixed map with no parameters — the raw material transforms
/// wrap a parameter around.
pub fn parse_base(text: &str, domain: Domain) -> Result<MapFamily, FamilyError> {
    check_domain(domain)?;
    let expr = parse(text)?;
    let uses_a = expr.uses_param(Param::A);
    let uses_b = expr.uses_param(Param::B);
    Ok(MapFamily {
        body: Body::Dsl(expr),
        uses_a,
        uses_b,
        domain,
        orientation: Orientation::Increasing,
    })
}

impl MapFamily {
    pub fn from_expr(expr: Expr, domain: Domain, orientation: Orientation) -> MapFamily {
        let uses_a = expr.uses_param(Param::A);
        let uses_b = expr.uses_param(Param::B);
        MapFamily {
            body: Body::Dsl(expr),
            uses_a,
            uses_b,
            domain,
            orientation,
        }
    }

    pub fn param_count(&self) -> u32 {
        self.uses_a as u32 + self.uses_b as u32
    }

    pub fn eval<S: Scalar>(&self, x: S, params: &Bindings<S>) -> Result<S, EvalError> {
        match &self.body {
            Body::Dsl(e) => eval_value(e, x, params),
            Body::SplitPow { n_left, n_right } => {
                let n = if x.to_f64() < 0.0 { *n_left } else { *n_right };
                let u = x.abs();
                let p = match int_degree(n) {
                    Some(k) => u.powi(k),
                    None => u.powf(S::from_f64(n)),
                };
                let v = S::ONE - params.a * p;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite)
                }
            }
        }
    }

    pub fn eval_jet<S: Scalar>(
        &self,
        x: S,
        params: &Bindings<S>,
        order: u8,
    ) -> Result<Jet<S>, EvalError> {
        match &self.body {
            Body::Dsl(e) => eval_jet(e, x, params, order),
            Body::SplitPow { n_left, n_right } => {
                let n = if x.to_f64() < 0.0 { *n_left } else { *n_right };
                let u = if x.to_f64() < 0.0 {
                    Jet::variable(x, order).neg()
                } else {
                    Jet::variable(x, order)
                };
                let p = u.pow_const(n, order)?;
                let j = Jet::constant(S::ONE).sub(Jet::constant(params.a).mul(p, order));
                if j.is_finite() {
                    Ok(j)
                } else {
                    Err(EvalError::NonFinite)
                }
            }
        }
    }

    /// Value plus first derivative in one evaluation.
    pub fn eval_d1<S: Scalar>(&self, x: S, params: &Bindings<S>) -> Result<(S, S), EvalError> {
        let j = self.eval_jet(x, params, 1)?;
        Ok((j.f, j.f1))
    }
}

fn int_degree(n: f64) -> Option<i32> {
    let k = n as i64;
    if k as f64 == n && k.unsigned_abs() <= i32::MAX as u64 {
        Some(k as i32)
    } else {
        None
    }
}

/// A point in (a, b) parameter space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint {
    pub a: f64,
    pub b: f64,
}

impl ParamPoint {
    pub fn new(a: f64, b: f64) -> ParamPoint {
        ParamPoint { a, b }
    }

    pub fn bindings<S: Scalar>(self) -> Bindings<S> {
        Bindings {
            a: S::from_f64(self.a),
            b: S::from_f64(self.b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Bindings;

    #[test]
    fn parse_family_detects_params_and_rejects_none() {
        let f = parse_family("a*x*(1-x)", Domain::Interval(0.0, 1.0), Orientation::Increasing)
            .unwrap();
        assert!(f.uses_a && !f.uses_b);
        assert_eq!(f.param_count(), 1);

        let err = parse_family("x*(1-x)", Domain::Interval(0.0, 1.0), Orientation::Increasing)
            .unwrap_err();
        assert_eq!(err, FamilyError::NoParameters);

        // but the same source is fine as a transform base
        assert!(parse_base("x*(1-x)", Domain::Interval(0.0, 1.0)).is_ok());

        let err = parse_family("a*x", Domain::Interval(1.0, 1.0), Orientation::Increasing)
            .unwrap_err();
        assert_eq!(err, FamilyError::EmptyDomain);
        let err =
            parse_family("a*x", Domain::SemiLine(-1.0), Orientation::Increasing).unwrap_err();
        assert_eq!(err, FamilyError::NegativeSemiLine);
    }

    #[test]
    fn domain_membership_and_seed_clamping() {
        let i = Domain::Interval(0.0, 1.0);
        assert!(i.contains(0.0) && i.contains(1.0) && !i.contains(1.0 + 1e-12));
        assert_eq!(i.clamp_interior(0.0), SEED_INSET);
        assert_eq!(i.clamp_interior(2.0), 1.0 - SEED_INSET);

        let s = Domain::SemiLine(1.0);
        assert!(s.contains(1e299) && !s.contains(1.5e300));
        assert_eq!(s.clamp_interior(0.5), 1.0 + SEED_INSET);

        assert!(Domain::Real.contains(-1e299));
        assert_eq!(Domain::Real.clamp_interior(-7.0), -7.0);
    }

    #[test]
    fn split_pow_body_matches_dsl_on_each_branch() {
        let split = MapFamily {
            body: Body::SplitPow {
                n_left: 2.0,
                n_right: 2.0,
            },
            uses_a: true,
            uses_b: false,
            domain: Domain::Interval(-1.0, 1.0),
            orientation: Orientation::Increasing,
        };
        let dsl = parse_family(
            "1-a*abs(x)^2",
            Domain::Interval(-1.0, 1.0),
            Orientation::Increasing,
        )
        .unwrap();
        let p = Bindings::one(1.4_f64);
        for &x in &[-0.9, -0.3, 0.0, 0.2, 1.0] {
            let v1 = split.eval(x, &p).unwrap();
            let v2 = dsl.eval(x, &p).unwrap();
            assert_eq!(v1, v2, "x = {x}");
        }
        // jet at the kink uses the right branch: f(0)=1, f1=0, f2=-2a
        let j = split.eval_jet(0.0, &p, 3).unwrap();
        assert_eq!((j.f, j.f1, j.f2, j.f3), (1.0, 0.0, -2.8, 0.0));
    }

    #[test]
    fn split_pow_hybrid_degrees_change_at_zero() {
        let split = MapFamily {
            body: Body::SplitPow {
                n_left: 3.0,
                n_right: 8.0,
            },
            uses_a: true,
            uses_b: false,
            domain: Domain::Interval(-1.0, 1.0),
            orientation: Orientation::Increasing,
        };
        let p = Bindings::one(1.0_f64);
        let l = split.eval(-0.5, &p).unwrap();
        let r = split.eval(0.5, &p).unwrap();
        assert!((l - (1.0 - 0.125)).abs() < 1e-15);
        assert!((r - (1.0 - 0.00390625)).abs() < 1e-15);
    }
}
