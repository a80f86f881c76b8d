//! Named family catalog: the stock of maps the CLI and the test suites
//! drive, each with calibrated hints for the cascade driver (where to
//! start, how far to march, where the attractor is seeded).

use crate::family::{Body, Domain, MapFamily, Orientation};
use alloc::vec::Vec;

/// Ordering convention for tine-width reports: factor-parameter maps on
/// a bounded interval list orbit elements biggest-first, exponent-style
/// maps littlest-first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TineOrder {
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug)]
pub struct CascadeHints {
    /// parameter where the path enters the cascade region (stable low period)
    pub t0: f64,
    /// march bound; for decreasing families this lies below `t0`
    pub t_end: f64,
    /// attractor seed; None derives one from the critical points at `t0`
    pub seed: Option<f64>,
    /// initial march step (in parameter units, always positive)
    pub first_step: f64,
    pub tine_order: TineOrder,
}

#[derive(Clone, Copy, Debug)]
enum Build {
    Src(&'static str),
    Split(f64, f64),
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    build: Build,
    pub domain: Domain,
    pub orientation: Orientation,
    pub hints: CascadeHints,
    pub blurb: &'static str,
}

impl CatalogEntry {
    pub fn family(&self) -> MapFamily {
        match self.build {
            Build::Src(src) => {
                let mut fam = crate::family::parse_base(src, self.domain)
                    .expect("catalog sources are well-formed");
                fam.orientation = self.orientation;
                fam
            }
            Build::Split(n_left, n_right) => split_family(n_left, n_right),
        }
    }

    pub fn source(&self) -> Option<&'static str> {
        match self.build {
            Build::Src(s) => Some(s),
            Build::Split(..) => None,
        }
    }
}

fn split_family(n_left: f64, n_right: f64) -> MapFamily {
    MapFamily {
        body: Body::SplitPow { n_left, n_right },
        uses_a: true,
        uses_b: false,
        domain: Domain::Interval(-1.0, 1.0),
        orientation: Orientation::Increasing,
    }
}

/// 1 − a·|x|^n on [−1, 1] with independent kink degrees; a ranges over (0, 2].
pub fn feigenmap(n_left: f64, n_right: f64) -> MapFamily {
    split_family(n_left, n_right)
}

const fn hints(t0: f64, t_end: f64, seed: Option<f64>, first_step: f64) -> CascadeHints {
    CascadeHints {
        t0,
        t_end,
        seed,
        first_step,
        tine_order: TineOrder::Descending,
    }
}

const fn hints_asc(t0: f64, t_end: f64, seed: Option<f64>, first_step: f64) -> CascadeHints {
    CascadeHints {
        t0,
        t_end,
        seed,
        first_step,
        tine_order: TineOrder::Ascending,
    }
}

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "logistic",
        build: Build::Src("a*x*(1-x)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(2.5, 3.64, None, 0.05),
        blurb: "a*x*(1-x) on [0,1]",
    },
    CatalogEntry {
        name: "xpow_a_over_x",
        build: Build::Src("x^(a/x)"),
        domain: Domain::SemiLine(1.0),
        orientation: Orientation::Increasing,
        hints: hints_asc(4.0, 15.2, None, 0.3),
        blurb: "x^(a/x) on [1,inf), single maximum at e",
    },
    CatalogEntry {
        name: "xpow_ax",
        build: Build::Src("x^(a*x)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints_asc(4.0, 15.2, None, 0.3),
        blurb: "x^(a*x) on [0,1], single minimum at 1/e",
    },
    CatalogEntry {
        name: "xi_sin",
        build: Build::Src("(sin(pi/x)+1)^a"),
        domain: Domain::SemiLine(1.0),
        orientation: Orientation::Increasing,
        hints: hints_asc(1.5, 6.0, None, 0.05),
        blurb: "(sin(pi/x)+1)^a on [1,inf)",
    },
    CatalogEntry {
        name: "psi_quad",
        build: Build::Src("((x^2+x-1)/x^2)^a"),
        domain: Domain::SemiLine(1.0),
        orientation: Orientation::Increasing,
        hints: hints_asc(5.0, 30.0, None, 0.3),
        blurb: "((x^2+x-1)/x^2)^a on [1,inf), maximum at x=2",
    },
    CatalogEntry {
        name: "psi_exp",
        build: Build::Src("exp(-sin(pi*x))^a"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.2, 3.75, None, 0.05),
        blurb: "exp(-sin(pi*x))^a on [0,1], valley at 1/2",
    },
    CatalogEntry {
        name: "xi_exp",
        build: Build::Src("exp(-sin(pi*x^a))"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.2, 3.75, None, 0.05),
        blurb: "exp(-sin(pi*x^a)) on [0,1], moving valley",
    },
    CatalogEntry {
        name: "inv_sin",
        build: Build::Src("1/(sin(pi*x)+1)^a"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.0, 8.0, None, 0.1),
        blurb: "1/(sin(pi*x)+1)^a on [0,1]",
    },
    CatalogEntry {
        name: "singer_quartic",
        build: Build::Src("a*(7.86*x-23.31*x^2+28.75*x^3-13.3*x^4)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.95, 1.06, None, 0.005),
        blurb: "Singer's quartic times a",
    },
    CatalogEntry {
        name: "selfexp_hump",
        build: Build::Src("a*(1-x^x*(1-x)^(1-x))"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.4, 2.05, None, 0.02),
        blurb: "a*(1-x^x*(1-x)^(1-x)), positive-Schwarzian shoulders",
    },
    CatalogEntry {
        name: "relaxed_quartic",
        build: Build::Src("a*(-1.55*x^4+4.34*x^3-4.56*x^2+1.77*x)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(2.5, 4.25, None, 0.05),
        blurb: "quartic with positive Schwarzian tail past 0.7",
    },
    CatalogEntry {
        name: "octic_two_max",
        build: Build::Src("a*(-x^8+4*x^3-5*x^2+2*x)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(2.8, 3.26, None, 0.02),
        blurb: "octic with two unequal maxima",
    },
    CatalogEntry {
        name: "trimax_bumps",
        build: Build::Src(
            "a*(9*x*(1-x)*(1-3*x*(1-x))+x^4*(1-x^4)+0.25*(4*x*(1-x))^44)",
        ),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.7, 1.12, None, 0.02),
        blurb: "three maxima, dominant centre spike",
    },
    CatalogEntry {
        name: "trimax_octic_05",
        build: Build::Src("a*(2.75*(-x^8+4*x^3-5*x^2+2*x)+0.05*(4*x*(1-x))^42)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.05, 1.21, None, 0.005),
        blurb: "octic pair plus 0.05 centre spike",
    },
    CatalogEntry {
        name: "trimax_octic_03",
        build: Build::Src("a*(2.75*(-x^8+4*x^3-5*x^2+2*x)+0.03*(4*x*(1-x))^42)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.05, 1.21, None, 0.005),
        blurb: "octic pair plus 0.03 centre spike",
    },
    CatalogEntry {
        name: "pic10_two_max",
        build: Build::Src(
            "a*(0.15*(1-(2*x-1)^4)+0.5*(1-(2*(1-x)^8-1)^4)+2.4*x^2*(1-x^2))",
        ),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.98, 1.19, None, 0.005),
        blurb: "two maxima, relaxed sign conditions",
    },
    CatalogEntry {
        name: "app3_two_max",
        build: Build::Src("a*(1.2*x^7.9*(1-x^7.9)+(1-x)^2*(1-(1-x)^2))"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(2.7, 3.2, None, 0.01),
        blurb: "two maxima with locally chaotic right window",
    },
    CatalogEntry {
        name: "dec_selfexp",
        build: Build::Src("(x*(1-x))^(a-x*(1-x))"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Decreasing,
        hints: hints(0.5, 0.248, None, 0.01),
        blurb: "(x(1-x))^(a-x(1-x)), cascades as a decreases",
    },
    CatalogEntry {
        name: "asin_sin",
        build: Build::Src("a^sin(pi*x)*sin(pi*x)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.45, 0.95, None, 0.01),
        blurb: "a^sin(pi*x)*sin(pi*x) on [0,1]",
    },
    CatalogEntry {
        name: "gamma_sine",
        build: Build::Src("a*(sin(2*pi*x)/2+x)"),
        domain: Domain::Real,
        orientation: Orientation::Increasing,
        hints: hints(0.55, 1.1, Some(0.5), 0.01),
        blurb: "a*(sin(2*pi*x)/2+x) on the whole line",
    },
    CatalogEntry {
        name: "hump_pow",
        build: Build::Src("(x*(1-x))^a"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.3, 3.0, None, 0.05),
        blurb: "(x(1-x))^a, never reaches a flip",
    },
    CatalogEntry {
        name: "pic12_f",
        build: Build::Src("a*(1.5625*(0.25-(x-0.5)^2))"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(1.5, 2.35, None, 0.02),
        blurb: "rescaled parabola, first mixing component",
    },
    CatalogEntry {
        name: "pic12_g",
        build: Build::Src("a*(0.25-(2.5*(0.25-(x-0.5)^2)-0.5)^2)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(3.2, 3.98, None, 0.02),
        blurb: "degree-4 composite, second mixing component",
    },
    CatalogEntry {
        name: "pic12_h",
        build: Build::Src(
            "a*(1.5625*(0.25-(x-0.5)^2))+b*(0.25-(2.5*(0.25-(x-0.5)^2)-0.5)^2)",
        ),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.0, 0.85, None, 0.02),
        blurb: "two-parameter mix a*f+b*g; drive along a direction",
    },
    CatalogEntry {
        name: "feigenmap",
        build: Build::Split(2.0, 2.0),
        domain: Domain::Interval(-1.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(0.4, 2.0, Some(0.0), 0.02),
        blurb: "1-a*|x|^2 on [-1,1]; see the feigenvalue command for other degrees",
    },
    CatalogEntry {
        name: "flip_shift",
        build: Build::Src("a-x-x^2"),
        domain: Domain::Interval(-2.3, 1.3),
        orientation: Orientation::Increasing,
        hints: hints(-0.2, 0.66, None, 0.02),
        blurb: "a-x-x^2, flips starting at a=0",
    },
    CatalogEntry {
        name: "flip_shift_inner",
        build: Build::Src("-(x+a)-(x+a)^2"),
        domain: Domain::Interval(-3.0, 1.5),
        orientation: Orientation::Increasing,
        hints: hints(-0.2, 0.66, None, 0.02),
        blurb: "-(x+a)-(x+a)^2, shifted twin of flip_shift",
    },
    CatalogEntry {
        name: "fold_shift",
        build: Build::Src("a-x^2"),
        domain: Domain::Interval(-2.5, 2.5),
        orientation: Orientation::Increasing,
        hints: hints(0.0, 1.3, None, 0.02),
        blurb: "a-x^2; fixed-point pair born at a=-1/4",
    },
    CatalogEntry {
        name: "fold_shift_inner",
        build: Build::Src("-(a+x)^2"),
        domain: Domain::Interval(-3.8, 2.8),
        orientation: Orientation::Increasing,
        hints: hints(0.0, 1.3, None, 0.02),
        blurb: "-(a+x)^2, shifted twin of fold_shift",
    },
    CatalogEntry {
        name: "pitchfork_normal",
        build: Build::Src("a*x-x^3"),
        domain: Domain::Interval(-2.5, 2.5),
        orientation: Orientation::Increasing,
        hints: hints(1.3, 2.4, None, 0.02),
        blurb: "a*x-x^3; symmetric pair born at a=1, flip at a=2",
    },
    CatalogEntry {
        name: "pitchfork_outer",
        build: Build::Src("a*(x-x^3)"),
        domain: Domain::Interval(-2.5, 2.5),
        orientation: Orientation::Increasing,
        hints: hints(1.3, 2.4, None, 0.02),
        blurb: "a*(x-x^3), factor twin of pitchfork_normal",
    },
    CatalogEntry {
        name: "pitchfork_inner",
        build: Build::Src("a*x-(a*x)^3"),
        domain: Domain::Interval(-2.5, 2.5),
        orientation: Orientation::Increasing,
        hints: hints(1.3, 2.4, None, 0.02),
        blurb: "a*x-(a*x)^3, argument twin of pitchfork_normal",
    },
    CatalogEntry {
        name: "transcritical_normal",
        build: Build::Src("a*x-x^2"),
        domain: Domain::Interval(-0.6, 3.6),
        orientation: Orientation::Increasing,
        hints: hints(2.5, 3.62, None, 0.02),
        blurb: "a*x-x^2; branch exchange at a=1, flip at a=3",
    },
    CatalogEntry {
        name: "transcritical_outer",
        build: Build::Src("a*(x-x^2)"),
        domain: Domain::Interval(0.0, 1.0),
        orientation: Orientation::Increasing,
        hints: hints(2.5, 3.62, None, 0.02),
        blurb: "a*(x-x^2), factor twin (the logistic map again)",
    },
    CatalogEntry {
        name: "transcritical_inner",
        build: Build::Src("a*x-(a*x)^2"),
        domain: Domain::Interval(-0.3, 1.1),
        orientation: Orientation::Increasing,
        hints: hints(2.5, 3.62, None, 0.02),
        blurb: "a*x-(a*x)^2, argument twin",
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn family(name: &str) -> Option<MapFamily> {
    find(name).map(|e| e.family())
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Bindings;

    #[test]
    fn every_entry_builds_and_evaluates_at_its_start() {
        for e in entries() {
            let fam = e.family();
            assert_eq!(fam.orientation, e.orientation, "{}", e.name);
            let params = crate::family::ParamPoint::new(e.hints.t0, e.hints.t0).bindings();
            // probe either the hinted seed or a point comfortably interior
            let x = e.hints.seed.unwrap_or_else(|| match fam.domain {
                Domain::Interval(lo, hi) => lo + 0.37 * (hi - lo),
                Domain::SemiLine(lo) => lo + 1.1,
                Domain::Real => 0.4,
            });
            let x = fam.domain.clamp_interior(x);
            let v = fam.eval(x, &params).unwrap_or_else(|err| {
                panic!("{} fails to evaluate at x={x}: {err}", e.name)
            });
            assert!(v.is_finite(), "{}", e.name);
        }
    }

    #[test]
    fn catalog_sources_round_trip_through_the_parser() {
        for e in entries() {
            if let Some(src) = e.source() {
                let expr = crate::expr::parse(src).unwrap();
                let printed = alloc::format!("{expr}");
                let again = crate::expr::parse(&printed)
                    .unwrap_or_else(|err| panic!("{}: `{printed}`: {err}", e.name));
                assert_eq!(expr, again, "{}", e.name);
            }
        }
    }

    #[test]
    fn names_are_unique_and_lookup_works() {
        let names = names();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[i + 1..].contains(n), "duplicate {n}");
        }
        assert!(find("logistic").is_some());
        assert!(find("no_such_family").is_none());
    }

    #[test]
    fn feigenmap_degrees_land_on_the_requested_branches() {
        let f = feigenmap(3.0, 8.0);
        let p = Bindings::one(1.0_f64);
        assert!((f.eval(-0.5, &p).unwrap() - 0.875).abs() < 1e-15);
        assert!((f.eval(0.5, &p).unwrap() - (1.0 - 0.00390625)).abs() < 1e-15);
    }
}
