//! Line-oriented suite files. One case per line:
//!
//! ```text
//! case <name> family=<catalog|expr:...|random:N> pair=<kind>,<kind> \
//!      depth=<N> tol=<x> expect=<confirm|refute|nochaos>
//! ```
//!
//! plus optional keys: `family2=` (explicit second member), `mode=`,
//! `kind=flip|tangent`, `range=lo:hi`, `domain=lo:hi|semiline:lo|real`,
//! `orient=inc|dec`, `c=`, `theta=`, `second=`, `xseed=`, `step=`,
//! `budget=`, `steps=`, `precision=double|dd`. Blank lines and `#`
//! comments are skipped.

use std::fmt;

use feigen_core::bifurcation::{CascadeOptions, EventKind, Precision};
use feigen_core::catalog;
use feigen_core::expr::parse as parse_expr;
use feigen_core::family::{parse_base, Domain, MapFamily, Orientation};
use feigen_core::transform::{transform, TransformExtras, TransformKind};

use crate::harness::{random_endomorphism, CaseKind, CaseSpec, Expectation};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SuiteParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SuiteParseError {}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SuiteParseError> {
        Err(SuiteParseError {
            line: self.line,
            message: message.into(),
        })
    }
}

fn parse_f64(ctx: &LineCtx, key: &str, v: &str) -> Result<f64, SuiteParseError> {
    v.parse::<f64>()
        .map_err(|_| SuiteParseError {
            line: ctx.line,
            message: format!("{key}= needs a number, got {v:?}"),
        })
}

fn parse_range(ctx: &LineCtx, key: &str, v: &str) -> Result<(f64, f64), SuiteParseError> {
    let Some((lo, hi)) = v.split_once(':') else {
        return ctx.err(format!("{key}= needs lo:hi, got {v:?}"));
    };
    Ok((parse_f64(ctx, key, lo)?, parse_f64(ctx, key, hi)?))
}

fn parse_domain(ctx: &LineCtx, v: &str) -> Result<Domain, SuiteParseError> {
    if v == "real" {
        return Ok(Domain::Real);
    }
    if let Some(lo) = v.strip_prefix("semiline:") {
        return Ok(Domain::SemiLine(parse_f64(ctx, "domain", lo)?));
    }
    let (lo, hi) = parse_range(ctx, "domain", v)?;
    Ok(Domain::Interval(lo, hi))
}

/// a family source plus everything needed to describe it back
struct Source {
    family: MapFamily,
    catalog: Option<&'static catalog::CatalogEntry>,
    rng_seed: Option<u64>,
    detail: String,
}

fn build_source(
    ctx: &LineCtx,
    src: &str,
    domain: Option<Domain>,
    orient: Orientation,
) -> Result<Source, SuiteParseError> {
    if let Some(expr) = src.strip_prefix("expr:") {
        let domain = domain.unwrap_or(Domain::Interval(0.0, 1.0));
        let mut family = match parse_base(expr, domain) {
            Ok(f) => f,
            Err(e) => return ctx.err(format!("family {expr:?}: {e}")),
        };
        family.orientation = orient;
        return Ok(Source {
            family,
            catalog: None,
            rng_seed: None,
            detail: expr.to_string(),
        });
    }
    if let Some(seed) = src.strip_prefix("random:") {
        let Ok(seed) = seed.parse::<u64>() else {
            return ctx.err(format!("random: needs an integer seed, got {seed:?}"));
        };
        let (family, expr) = random_endomorphism(seed);
        return Ok(Source {
            family,
            catalog: None,
            rng_seed: Some(seed),
            detail: expr,
        });
    }
    let Some(entry) = catalog::find(src) else {
        return ctx.err(format!("unknown catalog family {src:?}"));
    };
    if domain.is_some() {
        return ctx.err("domain= applies to expr: sources only");
    }
    Ok(Source {
        family: entry.family(),
        catalog: Some(entry),
        rng_seed: None,
        detail: src.to_string(),
    })
}

fn apply_member(
    ctx: &LineCtx,
    base: &MapFamily,
    kind: &str,
    extras: &TransformExtras,
) -> Result<MapFamily, SuiteParseError> {
    if kind == "identity" {
        if !base.uses_a {
            return ctx.err("identity member needs a family that already uses a");
        }
        return Ok(base.clone());
    }
    let Some(k) = TransformKind::from_name(kind) else {
        return ctx.err(format!("unknown transform {kind:?}"));
    };
    transform(base, k, extras).map_err(|e| SuiteParseError {
        line: ctx.line,
        message: format!("{kind}: {e}"),
    })
}

pub fn parse_suite(text: &str) -> Result<Vec<CaseSpec>, SuiteParseError> {
    let mut specs: Vec<CaseSpec> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: idx + 1 };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("case") {
            return ctx.err("expected `case <name> key=value ...`");
        }
        let Some(name) = tokens.next() else {
            return ctx.err("case needs a name");
        };
        if specs.iter().any(|s| s.name == name) {
            return ctx.err(format!("duplicate case name {name:?}"));
        }

        let mut family_src = None;
        let mut family2_src = None;
        let mut pair: Option<(String, String)> = None;
        let mut mode: Option<String> = None;
        let mut kind = EventKind::Flip;
        let mut depth: u32 = 4;
        let mut steps: u32 = 16;
        let mut tol: Option<f64> = None;
        let mut range: Option<(f64, f64)> = None;
        let mut domain: Option<Domain> = None;
        let mut orient = Orientation::Increasing;
        let mut expect = Expectation::Confirm;
        let mut extras = TransformExtras::default();
        let mut theta_src: Option<String> = None;
        let mut opts = CascadeOptions::default();

        for tok in tokens {
            let Some((key, value)) = tok.split_once('=') else {
                return ctx.err(format!("expected key=value, got {tok:?}"));
            };
            match key {
                "family" => family_src = Some(value.to_string()),
                "family2" => family2_src = Some(value.to_string()),
                "pair" => {
                    let Some((a, b)) = value.split_once(',') else {
                        return ctx.err("pair= needs two comma-separated transform names");
                    };
                    pair = Some((a.to_string(), b.to_string()));
                }
                "mode" => mode = Some(value.to_string()),
                "kind" => {
                    kind = match value {
                        "flip" => EventKind::Flip,
                        "tangent" => EventKind::Tangent,
                        _ => return ctx.err(format!("kind= must be flip|tangent, got {value:?}")),
                    }
                }
                "depth" => {
                    depth = value.parse().map_err(|_| SuiteParseError {
                        line: ctx.line,
                        message: format!("depth= needs an integer, got {value:?}"),
                    })?
                }
                "steps" => {
                    steps = value.parse().map_err(|_| SuiteParseError {
                        line: ctx.line,
                        message: format!("steps= needs an integer, got {value:?}"),
                    })?
                }
                "tol" => tol = Some(parse_f64(&ctx, "tol", value)?),
                "range" => range = Some(parse_range(&ctx, "range", value)?),
                "domain" => domain = Some(parse_domain(&ctx, value)?),
                "orient" => {
                    orient = match value {
                        "inc" => Orientation::Increasing,
                        "dec" => Orientation::Decreasing,
                        _ => return ctx.err(format!("orient= must be inc|dec, got {value:?}")),
                    }
                }
                "expect" => {
                    expect = match Expectation::from_name(value) {
                        Some(e) => e,
                        None => {
                            return ctx.err(format!(
                                "expect= must be confirm|refute|nochaos, got {value:?}"
                            ))
                        }
                    }
                }
                "c" => extras.c = Some(parse_f64(&ctx, "c", value)?),
                "theta" => theta_src = Some(value.to_string()),
                "second" => {
                    extras.second = Some(parse_expr(value).map_err(|e| SuiteParseError {
                        line: ctx.line,
                        message: format!("second=: {e}"),
                    })?)
                }
                "xseed" => opts.seed = Some(parse_f64(&ctx, "xseed", value)?),
                "step" => opts.first_step = Some(parse_f64(&ctx, "step", value)?),
                "budget" => {
                    opts.march_budget = value.parse().map_err(|_| SuiteParseError {
                        line: ctx.line,
                        message: format!("budget= needs an integer, got {value:?}"),
                    })?
                }
                "precision" => {
                    opts.precision = match value {
                        "double" => Precision::Double,
                        "dd" => Precision::DoubleDouble,
                        _ => {
                            return ctx.err(format!(
                                "precision= must be double|dd, got {value:?}"
                            ))
                        }
                    }
                }
                _ => return ctx.err(format!("unknown key {key:?}")),
            }
        }

        if let Some(t) = &theta_src {
            extras.theta = Some(parse_expr(t).map_err(|e| SuiteParseError {
                line: ctx.line,
                message: format!("theta=: {e}"),
            })?);
        }

        let Some(family_src) = family_src else {
            return ctx.err("every case needs family=");
        };
        let source = build_source(&ctx, &family_src, domain, orient)?;
        if let (Some(entry), None) = (source.catalog, range) {
            range = Some((entry.hints.t0, entry.hints.t_end));
            if opts.first_step.is_none() {
                opts.first_step = Some(entry.hints.first_step);
            }
            if opts.seed.is_none() {
                opts.seed = entry.hints.seed;
            }
        }
        let Some(range) = range else {
            return ctx.err("range=lo:hi required for non-catalog families");
        };

        let mode = mode.unwrap_or_else(|| {
            if pair.is_some() || family2_src.is_some() {
                "permeability".into()
            } else {
                "universality".into()
            }
        });

        let (case_kind, detail) = match mode.as_str() {
            "permeability" => {
                let (members, detail) = if let Some(second_src) = &family2_src {
                    if pair.is_some() {
                        return ctx.err("give either pair= or family2=, not both");
                    }
                    let second = build_source(&ctx, second_src, None, orient)?;
                    for (label, fam) in [("family", &source.family), ("family2", &second.family)]
                    {
                        if !fam.uses_a {
                            return ctx.err(format!("{label} must use the parameter a"));
                        }
                    }
                    (
                        (source.family.clone(), second.family),
                        format!("{} vs {}", source.detail, second.detail),
                    )
                } else if let Some((k1, k2)) = &pair {
                    let m1 = apply_member(&ctx, &source.family, k1, &extras)?;
                    let m2 = apply_member(&ctx, &source.family, k2, &extras)?;
                    ((m1, m2), format!("{k1} vs {k2} of {}", source.detail))
                } else {
                    return ctx.err("permeability needs pair= or family2=");
                };
                (CaseKind::Permeability { members, kind }, detail)
            }
            "universality" => {
                let mut family = source.family.clone();
                let mut detail = source.detail.clone();
                if extras.theta.is_some() {
                    family = transform(&family, TransformKind::ThetaReparam, &extras).map_err(
                        |e| SuiteParseError {
                            line: ctx.line,
                            message: format!("theta=: {e}"),
                        },
                    )?;
                    detail = format!("{} with a -> {}", detail, theta_src.unwrap());
                }
                if !family.uses_a {
                    return ctx.err("universality family must use the parameter a");
                }
                (CaseKind::Universality { family }, detail)
            }
            "multimax" => {
                if !source.family.uses_a {
                    return ctx.err("multimax family must use the parameter a");
                }
                (
                    CaseKind::MultiMax {
                        family: source.family.clone(),
                        steps,
                    },
                    source.detail.clone(),
                )
            }
            other => return ctx.err(format!("unknown mode {other:?}")),
        };

        let tol = tol.unwrap_or(match case_kind {
            CaseKind::Permeability { .. } => 1e-8,
            _ => 0.02,
        });

        specs.push(CaseSpec {
            name: name.to_string(),
            kind: case_kind,
            range,
            depth,
            tol,
            expect,
            rng_seed: source.rng_seed,
            opts,
            detail,
        });
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_shapes() {
        let text = "\
# comment
case a family=expr:x*(1-x) pair=outer_scale,inner_scale depth=3 range=2.5:3.6 tol=1e-9
case b family=logistic theta=a^3 mode=universality expect=refute
case c family=hump_pow expect=nochaos
case d family=octic_two_max mode=multimax steps=8
case e family=pitchfork_normal family2=pitchfork_outer kind=tangent depth=1 range=0.3:1.7
case f family=random:42 range=0.4:1.0
";
        let specs = parse_suite(text).unwrap();
        assert_eq!(specs.len(), 6);
        assert!(matches!(specs[0].kind, CaseKind::Permeability { kind: EventKind::Flip, .. }));
        assert_eq!(specs[0].tol, 1e-9);
        assert_eq!(specs[0].depth, 3);
        assert!(matches!(specs[1].kind, CaseKind::Universality { .. }));
        assert_eq!(specs[1].expect, Expectation::Refute);
        // catalog hints fill the range
        assert_eq!(specs[1].range, (2.5, 3.64));
        assert_eq!(specs[2].expect, Expectation::NoChaos);
        assert!(matches!(specs[3].kind, CaseKind::MultiMax { steps: 8, .. }));
        assert!(
            matches!(specs[4].kind, CaseKind::Permeability { kind: EventKind::Tangent, .. })
        );
        assert_eq!(specs[5].rng_seed, Some(42));
        assert!(specs[5].detail.starts_with("a*("));
    }

    #[test]
    fn rejects_malformed_lines() {
        for (text, needle) in [
            ("case", "needs a name"),
            ("run x family=logistic", "expected `case"),
            ("case x", "needs family="),
            ("case x family=nope", "unknown catalog"),
            ("case x family=expr:a*x*(1-x)", "range="),
            ("case x family=logistic bogus=1", "unknown key"),
            (
                "case x family=logistic pair=outer_scale,inner_scale",
                "already uses",
            ),
            (
                "case x family=logistic\ncase x family=logistic",
                "duplicate",
            ),
            ("case x family=expr:x*(1-x) range=0:1", "must use the parameter"),
        ] {
            let err = parse_suite(text).unwrap_err();
            assert!(
                err.message.contains(needle),
                "{text:?} -> {}",
                err.message
            );
        }
    }

    #[test]
    fn theta_rewrites_the_universality_family() {
        let specs = parse_suite(
            "case t family=logistic theta=3.5+(a-3.5)^3 range=2.0:3.4 depth=3\n",
        )
        .unwrap();
        let CaseKind::Universality { family } = &specs[0].kind else {
            panic!("wrong kind");
        };
        // at a = 3.5 the rewritten parameter is also 3.5
        let v = family
            .eval(0.5, &feigen_core::family::ParamPoint::new(3.5, 0.0).bindings())
            .unwrap();
        assert!((v - 3.5 * 0.25).abs() < 1e-12);
    }
}
