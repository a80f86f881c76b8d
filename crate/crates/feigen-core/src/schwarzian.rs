//! Schwarzian derivative S f = f‴/f′ − (3/2)(f″/f′)², its sign structure
//! over an interval, and the cascade-readiness checks built on it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::{find_critical_points, CritKind, CriticalPoint};
use crate::expr::Bindings;
use crate::family::{Domain, MapFamily, ParamPoint};
use crate::jet::EvalError;

/// Radius of the excluded ball around a critical point: the Schwarzian
/// has a pole there and its sign carries no information.
const POLE_BALL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum SchwarzianError {
    /// f′ vanishes at (or numerically at) the point.
    Pole { x: f64 },
    Eval(EvalError),
}

impl core::fmt::Display for SchwarzianError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SchwarzianError::Pole { x } => {
                write!(f, "Schwarzian pole: f′ vanishes near x = {x}")
            }
            SchwarzianError::Eval(e) => write!(f, "evaluation fault: {e}"),
        }
    }
}

impl core::error::Error for SchwarzianError {}

fn schwarzian_jet(
    family: &MapFamily,
    b: &Bindings<f64>,
    x: f64,
) -> Result<f64, SchwarzianError> {
    let j = family
        .eval_jet(x, b, 3)
        .map_err(SchwarzianError::Eval)?;
    // x is a pole when the Newton estimate of the nearest critical point
    // sits within rounding of x itself
    let near_crit = if j.f1 == 0.0 {
        true
    } else if j.f2 != 0.0 {
        (j.f1 / j.f2).abs() < 1e-9 * x.abs().max(1.0)
    } else {
        false
    };
    if near_crit {
        return Err(SchwarzianError::Pole { x });
    }
    let r = j.f2 / j.f1;
    let s = j.f3 / j.f1 - 1.5 * r * r;
    if !s.is_finite() {
        return Err(SchwarzianError::Pole { x });
    }
    Ok(s)
}

/// Schwarzian derivative of the map at a point, from the order-3 jet.
pub fn schwarzian_at(
    family: &MapFamily,
    params: ParamPoint,
    x: f64,
) -> Result<f64, SchwarzianError> {
    schwarzian_jet(family, &params.bindings(), x)
}

/// Sign structure of x → S f(x) over an interval. `crossings` are the
/// abscissas where the sign actually flips (strictly increasing);
/// `segment_signs` has one entry per stretch between them, alternating.
/// Critical points of f are poles of S; a ball around each is excluded
/// and listed in `poles`.
#[derive(Clone, Debug)]
pub struct SignProfile {
    pub interval: (f64, f64),
    pub crossings: Vec<f64>,
    pub segment_signs: Vec<i8>,
    pub poles: Vec<f64>,
    pub notes: Vec<String>,
}

impl SignProfile {
    /// (all segments negative, crossing count) restricted to a subinterval.
    pub fn sign_on(&self, lo: f64, hi: f64) -> (bool, usize) {
        let inside: usize = self
            .crossings
            .iter()
            .filter(|&&c| c > lo && c < hi)
            .count();
        let mut all_neg = true;
        let mut seg_lo = self.interval.0;
        for (k, &sign) in self.segment_signs.iter().enumerate() {
            let seg_hi = self
                .crossings
                .get(k)
                .copied()
                .unwrap_or(self.interval.1);
            if seg_hi > lo && seg_lo < hi && sign >= 0 {
                all_neg = false;
            }
            seg_lo = seg_hi;
        }
        (all_neg, inside)
    }
}

/// Grid scan of the Schwarzian sign with bisection refinement of each
/// change to ~1e-9. A sign flip across an excluded pole ball is recorded
/// as a crossing at the pole, with a note.
pub fn sign_profile(
    family: &MapFamily,
    params: ParamPoint,
    interval: (f64, f64),
    grid: u32,
) -> Result<SignProfile, SchwarzianError> {
    let (lo, hi) = interval;
    if !(hi > lo) || grid < 8 {
        return Err(SchwarzianError::Eval(EvalError::NonFinite));
    }
    let b: Bindings<f64> = params.bindings();
    let poles: Vec<f64> = find_critical_points(family, params, lo, hi)
        .into_iter()
        .map(|c| c.x)
        .collect();
    let ball = POLE_BALL * (hi - lo).max(1.0);
    let excluded = |x: f64| poles.iter().any(|&p| (x - p).abs() < ball);

    let mut samples: Vec<(f64, f64)> = Vec::new();
    for i in 0..=grid {
        let x = lo + (hi - lo) * (i as f64 / grid as f64);
        if excluded(x) {
            continue;
        }
        match schwarzian_jet(family, &b, x) {
            Ok(s) => samples.push((x, s)),
            Err(SchwarzianError::Pole { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if samples.len() < 2 {
        return Err(SchwarzianError::Eval(EvalError::NonFinite));
    }

    let mut notes = Vec::new();
    let first = samples[0];
    let last = samples[samples.len() - 1];
    if first.1.abs() > 1e4 {
        notes.push(format!(
            "S tends to {}∞ toward the left endpoint",
            if first.1 > 0.0 { "+" } else { "−" }
        ));
    }
    if last.1.abs() > 1e4 {
        notes.push(format!(
            "S tends to {}∞ toward the right endpoint",
            if last.1 > 0.0 { "+" } else { "−" }
        ));
    }

    let mut crossings = Vec::new();
    let mut segment_signs = Vec::new();
    segment_signs.push(if first.1 > 0.0 { 1i8 } else { -1 });
    for w in samples.windows(2) {
        let (xa, sa) = w[0];
        let (xb, sb) = w[1];
        if (sa > 0.0) == (sb > 0.0) {
            continue;
        }
        // a pole ball between the samples may carry the flip
        let pole_between = poles.iter().find(|&&p| p > xa && p < xb).copied();
        match refine_crossing(family, &b, (xa, sa), (xb, sb), &excluded) {
            Some(c) => crossings.push(c),
            None => {
                let p = pole_between.unwrap_or(0.5 * (xa + xb));
                notes.push(format!("sign change across the excluded pole at x = {p}"));
                crossings.push(p);
            }
        }
        segment_signs.push(if sb > 0.0 { 1 } else { -1 });
    }

    Ok(SignProfile {
        interval,
        crossings,
        segment_signs,
        poles,
        notes,
    })
}

/// Bisect a Schwarzian sign change; None when the flip hides inside an
/// excluded ball.
fn refine_crossing(
    family: &MapFamily,
    b: &Bindings<f64>,
    mut a: (f64, f64),
    mut c: (f64, f64),
    excluded: &dyn Fn(f64) -> bool,
) -> Option<f64> {
    for _ in 0..80 {
        if (c.0 - a.0).abs() <= 1e-9 * a.0.abs().max(1.0) {
            return Some(0.5 * (a.0 + c.0));
        }
        let mut mid = 0.5 * (a.0 + c.0);
        let mut s = if excluded(mid) {
            None
        } else {
            schwarzian_jet(family, b, mid).ok()
        };
        if s.is_none() {
            // golden-section nudge away from the pole
            mid = a.0 + 0.382 * (c.0 - a.0);
            s = if excluded(mid) {
                None
            } else {
                schwarzian_jet(family, b, mid).ok()
            };
        }
        let Some(s) = s else {
            return None;
        };
        if (s > 0.0) == (a.1 > 0.0) {
            a = (mid, s);
        } else {
            c = (mid, s);
        }
    }
    Some(0.5 * (a.0 + c.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    PassWithNotes,
    Fail,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::PassWithNotes => "pass-with-notes",
            Verdict::Fail => "fail",
        }
    }
}

/// Sufficient conditions for a clean period-doubling route on a bounded
/// interval: interval endpoints map to the base (or decrease), the last
/// maximum dominates the others, the Schwarzian is negative between the
/// first and last maximum and changes sign at most once beyond the last
/// one. Sign changes below the first maximum are counted but allowed.
/// Failing these conditions never proves a family cannot cascade.
#[derive(Clone, Debug)]
pub struct ReadinessReport {
    pub maxima: Vec<CriticalPoint>,
    pub endpoint_ok: bool,
    pub dominance_ok: bool,
    pub core_negative: bool,
    pub tail_changes: usize,
    pub tail_ok: bool,
    pub head_changes: usize,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReadinessError {
    UnboundedDomain,
    NoMaxima,
    Schwarzian(SchwarzianError),
}

impl core::fmt::Display for ReadinessError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ReadinessError::UnboundedDomain => {
                write!(f, "readiness checks need a bounded interval domain")
            }
            ReadinessError::NoMaxima => write!(f, "no interior maximum found"),
            ReadinessError::Schwarzian(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ReadinessError {}

pub fn check_bifurcation_readiness(
    family: &MapFamily,
    params: ParamPoint,
) -> Result<ReadinessReport, ReadinessError> {
    let Domain::Interval(lo, hi) = family.domain else {
        return Err(ReadinessError::UnboundedDomain);
    };
    let b: Bindings<f64> = params.bindings();
    let crits = find_critical_points(family, params, lo, hi);
    let maxima: Vec<CriticalPoint> = crits
        .into_iter()
        .filter(|c| c.kind == CritKind::Maximum)
        .collect();
    if maxima.is_empty() {
        return Err(ReadinessError::NoMaxima);
    }
    let mut notes = Vec::new();

    let f_lo = family.eval(lo, &b);
    let f_hi = family.eval(hi, &b);
    let vtol = 1e-9 * (hi - lo).max(1.0);
    let endpoint_ok = match (f_lo, f_hi) {
        (Ok(vl), Ok(vr)) => ((vl - lo).abs() <= vtol && (vr - lo).abs() <= vtol) || vl > vr,
        _ => {
            notes.push("map not evaluable at an interval endpoint".into());
            false
        }
    };

    let x1 = maxima[0].x;
    let xn = maxima[maxima.len() - 1].x;
    let vn = maxima[maxima.len() - 1].value;
    let dominance_ok = maxima
        .iter()
        .all(|m| m.value <= vn + 1e-12 * vn.abs().max(1.0));

    let inset = (hi - lo) * 1e-4;
    let profile = sign_profile(family, params, (lo + inset, hi - inset), 2048)
        .map_err(ReadinessError::Schwarzian)?;
    let ball = 2.0 * POLE_BALL * (hi - lo).max(1.0);
    let (core_neg, core_changes) = profile.sign_on(x1 + ball, xn - ball);
    let core_negative = if xn - x1 <= 2.0 * ball {
        true // single maximum: the core is empty
    } else {
        core_neg && core_changes == 0
    };
    let (_, tail_changes) = profile.sign_on(xn + ball, hi);
    let tail_ok = tail_changes <= 1;
    let (_, head_changes) = profile.sign_on(lo, x1 - ball);

    if head_changes > 0 {
        notes.push(format!(
            "Schwarzian changes sign {head_changes} time(s) below the first maximum (allowed)"
        ));
    }
    for m in &maxima {
        if m.fractional {
            notes.push(format!("maximum at x = {} has non-integer flatness", m.x));
        } else if m.degree >= 8 {
            notes.push(format!("maximum at x = {} has degree ≥ 8", m.x));
        }
    }
    notes.extend(profile.notes.iter().cloned());

    let constrained = endpoint_ok && dominance_ok && core_negative && tail_ok;
    let verdict = if !constrained {
        Verdict::Fail
    } else if notes.is_empty() {
        Verdict::Pass
    } else {
        Verdict::PassWithNotes
    };
    Ok(ReadinessReport {
        maxima,
        endpoint_ok,
        dominance_ok,
        core_negative,
        tail_changes,
        tail_ok,
        head_changes,
        verdict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::family::{parse_base, Domain};

    #[test]
    fn quadratic_hump_closed_form() {
        let family = catalog::family("logistic").unwrap();
        let p = ParamPoint::new(3.2, 0.0);
        let s0 = schwarzian_at(&family, p, 0.0).unwrap();
        assert_eq!(s0, -6.0);
        // closed form −6/(1−2x)² at a generic point, any parameter
        for (a, x) in [(2.5, 0.2), (3.7, 0.41), (0.9, -0.3)] {
            let s = schwarzian_at(&family, ParamPoint::new(a, 0.0), x).unwrap();
            let want = -6.0 / ((1.0 - 2.0 * x) * (1.0 - 2.0 * x));
            assert!((s - want).abs() < 1e-9 * want.abs());
        }
        // the pole at the maximum is reported as such
        assert!(matches!(
            schwarzian_at(&family, p, 0.5),
            Err(SchwarzianError::Pole { .. })
        ));
    }

    #[test]
    fn fractional_linear_maps_have_zero_schwarzian() {
        let family = parse_base("(2*x+1)/(x+3)", Domain::Interval(0.0, 1.0)).unwrap();
        for x in [0.05, 0.3, 0.62, 0.97] {
            let s = schwarzian_at(&family, ParamPoint::new(1.0, 1.0), x).unwrap();
            assert!(s.abs() < 1e-10, "S({x}) = {s:e}");
        }
    }

    #[test]
    fn selfpower_crossing() {
        // x^x = x^(a·x) at a = 1
        let family = catalog::family("xpow_ax").unwrap();
        let p = ParamPoint::new(1.0, 0.0);
        assert!(schwarzian_at(&family, p, 0.05).unwrap() > 0.0);
        let prof = sign_profile(&family, p, (0.001, 0.999), 512).unwrap();
        assert_eq!(prof.crossings.len(), 1, "crossings: {:?}", prof.crossings);
        assert!(
            (prof.crossings[0] - 0.080721).abs() < 1e-4,
            "crossing at {}",
            prof.crossings[0]
        );
        assert_eq!(prof.segment_signs, alloc::vec![1, -1]);
    }

    #[test]
    fn reciprocal_exponent_crossing() {
        // x^{1/x} = x^(a/x) at a = 1
        let family = catalog::family("xpow_a_over_x").unwrap();
        let prof = sign_profile(
            &family,
            ParamPoint::new(1.0, 0.0),
            (1.01, 100.0),
            2048,
        )
        .unwrap();
        assert_eq!(prof.crossings.len(), 1, "crossings: {:?}", prof.crossings);
        assert!(
            (prof.crossings[0] - 12.394246).abs() < 1e-3,
            "crossing at {}",
            prof.crossings[0]
        );
        assert_eq!(prof.segment_signs, alloc::vec![-1, 1]);
    }

    #[test]
    fn quartic_tail_crossing() {
        let family = catalog::family("relaxed_quartic").unwrap();
        let prof = sign_profile(
            &family,
            ParamPoint::new(1.0, 0.0),
            (0.01, 0.99),
            2048,
        )
        .unwrap();
        assert_eq!(prof.crossings.len(), 1, "crossings: {:?}", prof.crossings);
        assert!(
            (prof.crossings[0] - 0.700004).abs() < 1e-3,
            "crossing at {}",
            prof.crossings[0]
        );
        assert!(*prof.segment_signs.last().unwrap() > 0);
    }

    #[test]
    fn outer_factor_leaves_schwarzian_unchanged() {
        let family = catalog::family("relaxed_quartic").unwrap();
        let base = schwarzian_at(&family, ParamPoint::new(1.0, 0.0), 0.31).unwrap();
        for a in [0.5, 2.0, 4.0] {
            let s = schwarzian_at(&family, ParamPoint::new(a, 0.0), 0.31).unwrap();
            assert!(
                (s - base).abs() < 1e-9 * base.abs(),
                "a={a}: {s} vs {base}"
            );
        }
    }

    #[test]
    fn power_exponent_moves_the_crossing() {
        // (x^x)^a = x^(a·x): the sign-change abscissa depends on a
        let family = catalog::family("xpow_ax").unwrap();
        let mut crossings = Vec::new();
        for a in [1.0, 2.0, 4.0] {
            let prof =
                sign_profile(&family, ParamPoint::new(a, 0.0), (0.001, 0.999), 512).unwrap();
            assert!(!prof.crossings.is_empty());
            crossings.push(prof.crossings[0]);
        }
        assert!((crossings[0] - crossings[1]).abs() > 1e-3);
        assert!((crossings[1] - crossings[2]).abs() > 1e-3);
    }

    #[test]
    fn composition_cocycle() {
        // S(f∘g) = (Sf)(g)·g′² + Sg, with the composite jet chained by hand
        let f = catalog::family("logistic").unwrap();
        let g = catalog::family("relaxed_quartic").unwrap();
        let pf = ParamPoint::new(3.3, 0.0);
        let pg = ParamPoint::new(1.1, 0.0);
        let bf = pf.bindings();
        let bg = pg.bindings();
        let mut checked = 0;
        for i in 0..50 {
            let x = 0.02 + 0.96 * (i as f64 / 49.0);
            let jg = g.eval_jet(x, &bg, 3).unwrap();
            let jf = match f.eval_jet(jg.f, &bf, 3) {
                Ok(j) => j,
                Err(_) => continue,
            };
            let d1 = jf.f1 * jg.f1;
            let d2 = jf.f2 * jg.f1 * jg.f1 + jf.f1 * jg.f2;
            let d3 = jf.f3 * jg.f1.powi(3)
                + 3.0 * jf.f2 * jg.f1 * jg.f2
                + jf.f1 * jg.f3;
            if d1.abs() < 1e-6 {
                continue;
            }
            let lhs = d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
            let sf = match schwarzian_at(&f, pf, jg.f) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let sg = match schwarzian_at(&g, pg, x) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let rhs = sf * jg.f1 * jg.f1 + sg;
            assert!(
                (lhs - rhs).abs() < 1e-6 * lhs.abs().max(1.0),
                "x={x}: {lhs} vs {rhs}"
            );
            checked += 1;
        }
        assert!(checked >= 40, "only {checked} points were checkable");
    }

    #[test]
    fn readiness_verdicts() {
        let logistic = catalog::family("logistic").unwrap();
        let r = check_bifurcation_readiness(&logistic, ParamPoint::new(3.5, 0.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "notes: {:?}", r.notes);
        assert_eq!(r.maxima.len(), 1);
        assert_eq!(r.maxima[0].degree, 2);

        let octic = catalog::family("octic_two_max").unwrap();
        let r = check_bifurcation_readiness(&octic, ParamPoint::new(3.1, 0.0)).unwrap();
        assert!(
            matches!(r.verdict, Verdict::Pass | Verdict::PassWithNotes),
            "verdict {:?}, notes: {:?}",
            r.verdict,
            r.notes
        );
        assert_eq!(r.maxima.len(), 2);
        assert!(r.dominance_ok && r.core_negative && r.tail_ok);

        let pic10 = catalog::family("pic10_two_max").unwrap();
        let r = check_bifurcation_readiness(&pic10, ParamPoint::new(1.0, 0.0)).unwrap();
        assert_eq!(r.verdict, Verdict::PassWithNotes, "notes: {:?}", r.notes);
        assert!(r.head_changes > 0);
        assert!(r.core_negative && r.tail_ok);
    }
}
