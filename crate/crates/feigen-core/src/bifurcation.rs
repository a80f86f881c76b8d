//! Locating flip and tangent bifurcations along parameter paths, marching
//! out period-doubling cascades, and the derived diagnostics: δ ratios,
//! accumulation extrapolation, superstable parameters, and orbit-pair
//! (tine) widths.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::TineOrder;
use crate::dd::Dd;
use crate::dynamics::{
    advance, classify_attractor, default_seed, minimal_period, polish_cycle, Attractor,
};
use crate::expr::Bindings;
use crate::family::{Body, MapFamily, ParamPoint};
use crate::real::Scalar;

/// A straight line in parameter space: params(t) = base + t·dir.
/// t always marches upward; decreasing studies flip `dir`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPath {
    pub base: ParamPoint,
    pub dir: (f64, f64),
}

impl ParamPath {
    pub fn new(base: ParamPoint, dir: (f64, f64)) -> ParamPath {
        ParamPath { base, dir }
    }

    /// t is the `a` value itself.
    pub fn along_a() -> ParamPath {
        ParamPath::new(ParamPoint::new(0.0, 0.0), (1.0, 0.0))
    }

    pub fn along_a_at(b: f64) -> ParamPath {
        ParamPath::new(ParamPoint::new(0.0, b), (1.0, 0.0))
    }

    pub fn along_b_at(a: f64) -> ParamPath {
        ParamPath::new(ParamPoint::new(a, 0.0), (0.0, 1.0))
    }

    pub fn reversed(self) -> ParamPath {
        ParamPath::new(self.base, (-self.dir.0, -self.dir.1))
    }

    pub fn point(&self, t: f64) -> ParamPoint {
        ParamPoint::new(self.base.a + t * self.dir.0, self.base.b + t * self.dir.1)
    }

    pub fn bindings<S: Scalar>(&self, t: S) -> Bindings<S> {
        Bindings {
            a: S::from_f64(self.base.a) + t * S::from_f64(self.dir.0),
            b: S::from_f64(self.base.b) + t * S::from_f64(self.dir.1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Multiplier crosses −1; the attracting period doubles.
    Flip,
    /// Multiplier reaches +1: fold, transcritical, pitchfork, or a
    /// periodic-window birth.
    Tangent,
}

#[derive(Clone, Copy, Debug)]
pub struct BifurcationEvent {
    /// Path coordinate of the event.
    pub t: f64,
    pub params: ParamPoint,
    pub kind: EventKind,
    /// Period of the orbit whose multiplier hits the target.
    pub period_before: u32,
    /// |multiplier − target| at the reported t.
    pub residual: f64,
    /// Width of the final refinement bracket.
    pub bracket_width: f64,
}

#[derive(Clone, Debug)]
pub struct BifurcationSequence {
    pub path: ParamPath,
    pub base_period: u32,
    pub events: Vec<BifurcationEvent>,
    /// False when the march stopped before reaching the requested count.
    pub complete: bool,
    pub note: Option<String>,
}

impl BifurcationSequence {
    pub fn t_values(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.t).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CascadeError {
    CascadeNotFound { t: f64, found: String },
    NoSeed,
    InvalidBracket { reason: String },
    LostOrbit { t: f64, rank: u32 },
    RefineFailed { rank: u32 },
    DuplicateEvents,
    NoRoot { what: String },
}

impl core::fmt::Display for CascadeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CascadeError::CascadeNotFound { t, found } => {
                write!(f, "cascade not found: at t={t} the attractor is {found}")
            }
            CascadeError::NoSeed => write!(
                f,
                "no seed available: the family has no interior extremum; pass a seed explicitly"
            ),
            CascadeError::InvalidBracket { reason } => write!(f, "invalid bracket: {reason}"),
            CascadeError::LostOrbit { t, rank } => {
                write!(f, "lost the tracked orbit near t={t} at rank {rank}")
            }
            CascadeError::RefineFailed { rank } => {
                write!(f, "refinement did not converge at rank {rank}")
            }
            CascadeError::DuplicateEvents => write!(f, "duplicate parameter values"),
            CascadeError::NoRoot { what } => write!(f, "no sign change found for {what}"),
        }
    }
}

impl core::error::Error for CascadeError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    /// Double-double refinement for ranks past 9, where gaps shrink
    /// toward the f64 noise floor.
    DoubleDouble,
}

#[derive(Clone, Copy, Debug)]
pub struct CascadeOptions {
    pub seed: Option<f64>,
    pub first_step: Option<f64>,
    pub precision: Precision,
    /// March-step budget across the whole cascade.
    pub march_budget: u32,
}

impl Default for CascadeOptions {
    fn default() -> CascadeOptions {
        CascadeOptions {
            seed: None,
            first_step: None,
            precision: Precision::Double,
            march_budget: 6000,
        }
    }
}

/// A refined multiplier-crossing: t kept in working precision so the
/// double-double path can report sub-f64 residual structure.
struct Refined<S> {
    t: S,
    residual: f64,
    width: f64,
}

/// Polish the period-p cycle at path coordinate t from a guess, rejecting
/// collapses onto a shorter cycle. Returns (lead point, multiplier).
fn polish_at<S: Scalar>(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    t: S,
    guess: S,
) -> Option<(S, S)> {
    let b = path.bindings(t);
    let (orbit, m) = polish_cycle(family, &b, p, guess, 60)?;
    if p > 1 {
        let of: Vec<f64> = orbit.iter().map(|v| v.to_f64()).collect();
        if minimal_period(&of, p) != p {
            return None;
        }
    }
    Some((orbit[0], m))
}

/// Safeguarded secant on multiplier(t) − target across a sign-change
/// bracket, with Newton orbit continuation at every iterate. Endpoint
/// multipliers are re-evaluated in S so a double-double call really
/// refines beyond f64.
fn refine_crossing<S: Scalar>(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    target: f64,
    end1: (f64, f64),
    end2: (f64, f64),
) -> Option<Refined<S>> {
    let tgt = S::from_f64(target);
    let mut s1 = {
        let t = S::from_f64(end1.0);
        let (x, m) = polish_at(family, path, p, t, S::from_f64(end1.1))?;
        (t, x, m - tgt)
    };
    let mut s2 = {
        let t = S::from_f64(end2.0);
        let (x, m) = polish_at(family, path, p, t, S::from_f64(end2.1))?;
        (t, x, m - tgt)
    };
    if s1.2.to_f64() == 0.0 {
        return Some(Refined { t: s1.0, residual: 0.0, width: 0.0 });
    }
    if s2.2.to_f64() == 0.0 {
        return Some(Refined { t: s2.0, residual: 0.0, width: 0.0 });
    }
    if (s1.2.to_f64() > 0.0) == (s2.2.to_f64() > 0.0) {
        return None;
    }
    let mut best = if s1.2.abs().to_f64() <= s2.2.abs().to_f64() {
        (s1.0, s1.2.abs().to_f64())
    } else {
        (s2.0, s2.2.abs().to_f64())
    };
    let mut prev = (s1.0, s1.2);
    let mut last = (s2.0, s2.2);
    let mut same_side = 0u32;
    let mut width = (s2.0 - s1.0).abs();
    for _ in 0..160 {
        width = (s2.0 - s1.0).abs();
        let scale = s1.0.abs().to_f64().max(1.0);
        if width.to_f64() <= S::EPS * 450.0 * scale {
            break;
        }
        let (lo, hi) = if s1.0 < s2.0 { (s1.0, s2.0) } else { (s2.0, s1.0) };
        let mid = lo + (hi - lo) * S::from_f64(0.5);
        let margin = (hi - lo) * S::from_f64(1e-6);
        let denom = last.1 - prev.1;
        let mut cand = if denom.abs().to_f64() != 0.0 && same_side < 4 {
            last.0 - last.1 * (last.0 - prev.0) / denom
        } else {
            mid
        };
        if !cand.to_f64().is_finite() || !(cand > lo + margin && cand < hi - margin) {
            cand = mid;
        }
        let guess = if (cand - s1.0).abs() <= (cand - s2.0).abs() { s1.1 } else { s2.1 };
        match polish_at(family, path, p, cand, guess) {
            Some((x, m)) => {
                let g = m - tgt;
                prev = last;
                last = (cand, g);
                let ga = g.abs().to_f64();
                if ga < best.1 {
                    best = (cand, ga);
                }
                if ga == 0.0 {
                    break;
                }
                if (g.to_f64() > 0.0) == (s1.2.to_f64() > 0.0) {
                    if cand == s1.0 {
                        break;
                    }
                    s1 = (cand, x, g);
                    same_side = if mid == cand { 0 } else { same_side + 1 };
                } else {
                    if cand == s2.0 {
                        break;
                    }
                    s2 = (cand, x, g);
                    same_side = 0;
                }
            }
            None => {
                // degrade to bisection on the next pass
                prev = last;
            }
        }
    }
    Some(Refined { t: best.0, residual: best.1, width: width.to_f64() })
}

/// Polish preceded by attractor warming: near a fold the root moves like
/// 1/√(t−t*) per unit t, so a guess carried over from a nearby parameter
/// can land by the repelling pair-center where bare Newton blows up.
/// Iterating f^p first re-contracts the guess onto the stable branch.
fn warm_polish_at<S: Scalar>(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    t: S,
    guess: S,
    sweeps: u32,
) -> Option<(S, S)> {
    let b = path.bindings(t);
    let mut x = guess;
    for k in 0..sweeps {
        let Some((fx, m)) = crate::dynamics::sweep_cycle(family, &b, p, x) else {
            break;
        };
        if k == 0 && m.abs().to_f64() > 1.0 {
            break; // repelling cycle: iterating would expel the guess
        }
        if !fx.to_f64().is_finite() {
            break;
        }
        x = fx;
    }
    polish_at(family, path, p, t, x).or_else(|| polish_at(family, path, p, t, guess))
}

/// One-sided tangent bracketing: the cycle exists on one side of the
/// event and vanishes on the other (fold, window birth). The signed
/// square (m−1)·|m−1| is asymptotically linear through the root, so a
/// secant on it converges despite the square-root multiplier profile.
/// `stop_rel` ends the collapse early so a Newton finisher can take over
/// while the cycle is still numerically solid.
struct FoldState<S> {
    def_t: S,
    def_x: S,
    undef_t: S,
    best_t: S,
    residual: f64,
}

fn refine_fold<S: Scalar>(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    def: (f64, f64),
    undef_t: f64,
    stop_rel: f64,
) -> Option<FoldState<S>> {
    let h_of = |m: S| {
        let w = m - S::ONE;
        w * w.abs()
    };
    let mut d_t = S::from_f64(def.0);
    let (mut d_x, m0) = warm_polish_at(family, path, p, d_t, S::from_f64(def.1), 48)?;
    let mut u_t = S::from_f64(undef_t);
    let mut best = (d_t, (m0 - S::ONE).abs().to_f64());
    // second history point a quarter-step deeper inside the defined region
    let inner = d_t - (u_t - d_t) * S::from_f64(0.25);
    let mut hist = match warm_polish_at(family, path, p, inner, d_x, 48) {
        Some((_, m)) => ((inner, h_of(m)), (d_t, h_of(m0))),
        None => ((d_t, h_of(m0)), (d_t, h_of(m0))),
    };
    for _ in 0..140 {
        let width = (u_t - d_t).abs();
        let scale = d_t.abs().to_f64().max(1.0);
        if width.to_f64() <= (S::EPS * 450.0).max(stop_rel) * scale {
            break;
        }
        let mid = d_t + (u_t - d_t) * S::from_f64(0.5);
        let ((t0, h0), (t1, h1)) = hist;
        let denom = h1 - h0;
        let mut cand = if denom.abs().to_f64() != 0.0 {
            t1 - h1 * (t1 - t0) / denom
        } else {
            mid
        };
        // candidate must sit strictly between the defined point and the
        // undefined bound
        let between = (cand - d_t).to_f64() * (u_t - cand).to_f64();
        if !cand.to_f64().is_finite() || between <= 0.0 {
            cand = mid;
        }
        match warm_polish_at(family, path, p, cand, d_x, 48) {
            Some((x, m)) => {
                d_t = cand;
                d_x = x;
                hist = (hist.1, (cand, h_of(m)));
                let r = (m - S::ONE).abs().to_f64();
                if r < best.1 {
                    best = (cand, r);
                }
            }
            None => {
                u_t = cand;
                // poison history so the next candidate bisects
                hist = (hist.1, hist.1);
            }
        }
    }
    Some(FoldState { def_t: d_t, def_x: d_x, undef_t: u_t, best_t: best.0, residual: best.1 })
}

/// Two-variable Newton on the extended system (f^p(x) − x, f^p′(x) − 1).
/// A fold is a regular root of this system — the Jacobian stays
/// nonsingular by transversality — so plain f64 lands t to a few ulp
/// with no square-root bottleneck. Jacobian by finite differences; the
/// root accuracy is set by the (exact) residual evaluation, not by the
/// Jacobian quality.
fn fold_newton(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    t0: f64,
    x0: f64,
    guard: (f64, f64),
) -> Option<(f64, f64, f64)> {
    let eval = |t: f64, x: f64| -> Option<(f64, f64)> {
        let b = path.bindings::<f64>(t);
        let (fx, m) = crate::dynamics::sweep_cycle(family, &b, p, x)?;
        Some((fx - x, m - 1.0))
    };
    let mut t = t0;
    let mut x = x0;
    let mut last_step = f64::INFINITY;
    for _ in 0..60 {
        if t < guard.0 || t > guard.1 {
            return None;
        }
        let (g, r) = eval(t, x)?;
        let hx = 1e-7 * x.abs().max(1e-3);
        let ht = 1e-7 * t.abs().max(1e-3);
        let (g_x, r_x) = eval(t, x + hx)?;
        let (g_t, r_t) = eval(t + ht, x)?;
        let jgx = (g_x - g) / hx;
        let jrx = (r_x - r) / hx;
        let jgt = (g_t - g) / ht;
        let jrt = (r_t - r) / ht;
        let det = jgx * jrt - jgt * jrx;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (g * jrt - jgt * r) / det;
        let dt = (jgx * r - g * jrx) / det;
        x -= dx;
        t -= dt;
        if !x.is_finite() || !t.is_finite() {
            return None;
        }
        let step = (dx.abs() / x.abs().max(1.0)).max(dt.abs() / t.abs().max(1.0));
        if step <= 4.0 * f64::EPSILON {
            last_step = step;
            break;
        }
        if step > last_step * 8.0 && step > 1e-3 {
            return None; // diverging
        }
        last_step = step;
    }
    // report only what the final point actually evaluates to
    let (g, r) = eval(t, x)?;
    if g.abs() > 1e-8 * x.abs().max(1.0) {
        return None;
    }
    if p > 1 {
        let b = path.bindings::<f64>(t);
        let mut pts = Vec::with_capacity(p as usize);
        let mut y = x;
        for k in 0..p as u64 {
            pts.push(y);
            y = advance(family, &b, y, k).ok()?;
        }
        if minimal_period(&pts, p) != p {
            return None;
        }
    }
    let width = if last_step.is_finite() {
        last_step.max(4.0 * f64::EPSILON) * t.abs().max(1.0)
    } else {
        4.0 * f64::EPSILON * t.abs().max(1.0)
    };
    Some((t, r.abs(), width))
}

/// Fold refinement at full accuracy: a coarse one-sided collapse keeps
/// the cycle numerically solid, then the extended-system Newton lands
/// the tangency. Falls back to a deep double-double collapse when the
/// Newton step is rejected.
fn refine_fold_full(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    def: (f64, f64),
    undef_t: f64,
) -> Option<(f64, f64, f64)> {
    let st = refine_fold::<f64>(family, path, p, def, undef_t, 1e-5)?;
    let w = (st.undef_t - st.def_t).abs().max(1e-5 * st.def_t.abs().max(1.0));
    let guard = (
        st.def_t.min(st.undef_t) - 8.0 * w,
        st.def_t.max(st.undef_t) + 8.0 * w,
    );
    if let Some(hit) = fold_newton(family, path, p, st.def_t, st.def_x, guard) {
        return Some(hit);
    }
    let dd = refine_fold::<Dd>(family, path, p, (st.def_t, st.def_x), st.undef_t, 0.0)?;
    let width = (dd.undef_t - dd.def_t).abs().to_f64();
    Some((dd.best_t.to_f64(), dd.residual, width))
}

/// Newton-continue a period-p cycle from one path coordinate to another,
/// sampling (t, lead point, multiplier) along the way. Steps shrink on
/// polish failure; if the cycle genuinely ends (fold), the failure
/// coordinate comes back alongside the samples gathered so far.
fn track_cycle(
    family: &MapFamily,
    path: &ParamPath,
    p: u32,
    from: (f64, f64),
    to_t: f64,
) -> (Vec<(f64, f64, f64)>, Option<f64>) {
    let mut out = Vec::new();
    let Some((x0, m0)) = polish_at(family, path, p, from.0, from.1) else {
        return (out, Some(from.0));
    };
    out.push((from.0, x0, m0));
    let total = to_t - from.0;
    if total == 0.0 {
        return (out, None);
    }
    let mut t = from.0;
    let mut x = x0;
    let mut h = total / 16.0;
    loop {
        let remaining = to_t - t;
        if remaining == 0.0 {
            return (out, None);
        }
        let tn = if remaining.abs() <= h.abs() { to_t } else { t + h };
        match polish_at(family, path, p, tn, x) {
            Some((xn, mn)) => {
                t = tn;
                x = xn;
                out.push((t, x, mn));
                h *= 1.25;
                if h.abs() > total.abs() / 8.0 {
                    h = total.signum() * total.abs() / 8.0;
                }
            }
            None => {
                h *= 0.5;
                if h.abs() < total.abs() * 1e-9 {
                    return (out, Some(tn));
                }
            }
        }
    }
}

fn attractor_period(att: &Attractor) -> Option<(u32, f64, f64)> {
    match att {
        Attractor::Periodic { period, orbit, multiplier } => {
            Some((*period, orbit[0], *multiplier))
        }
        _ => None,
    }
}

/// Locate one bifurcation event inside a bracket. Both endpoints are
/// classified; the refinement strategy follows from how they differ:
/// doubled periods → flip (secant on m+1 along the continued cycle),
/// equal periods → transversal tangent (secant on m−1 along the branch
/// through the lower endpoint), and a periodic/non-periodic or
/// window-ratio pair → one-sided tangent (fold-style refinement against
/// the boundary where the cycle vanishes). The endpoint order does not
/// matter. `rank` is diagnostic only.
pub fn find_bifurcation(
    family: &MapFamily,
    path: &ParamPath,
    rank: u32,
    bracket: (f64, f64),
    kind: EventKind,
    seed: Option<f64>,
) -> Result<BifurcationEvent, CascadeError> {
    let _ = rank;
    let (ta, tb) = if bracket.0 <= bracket.1 {
        (bracket.0, bracket.1)
    } else {
        (bracket.1, bracket.0)
    };
    if ta == tb {
        return Err(CascadeError::InvalidBracket { reason: "empty bracket".into() });
    }
    let seed_at = |t: f64| -> Result<f64, CascadeError> {
        match seed {
            Some(s) => Ok(s),
            None => default_seed(family, path.point(t)).ok_or(CascadeError::NoSeed),
        }
    };
    let ca = classify_attractor(family, path.point(ta), seed_at(ta)?);
    let cb = classify_attractor(family, path.point(tb), seed_at(tb)?);
    let finish = |p: u32, refined: Option<(f64, f64, f64)>, want: EventKind| {
        let (t, residual, width) = refined.ok_or(CascadeError::RefineFailed { rank })?;
        Ok(BifurcationEvent {
            t,
            params: path.point(t),
            kind: want,
            period_before: p,
            residual,
            bracket_width: width,
        })
    };
    match (attractor_period(&ca), attractor_period(&cb)) {
        (Some((pa, xa, _)), Some((pb, xb, _))) => {
            let doubled = |lo: u32, hi: u32| hi > lo && hi % lo == 0 && (hi / lo).is_power_of_two();
            if doubled(pa, pb) || doubled(pb, pa) {
                if kind != EventKind::Flip {
                    return Err(CascadeError::InvalidBracket {
                        reason: format!(
                            "endpoint periods {pa} and {pb} indicate a flip, not a tangent"
                        ),
                    });
                }
                let (from, far) = if pa < pb { ((ta, xa), tb) } else { ((tb, xb), ta) };
                let p = pa.min(pb);
                let (samples, lost) = track_cycle(family, path, p, from, far);
                let pair = samples.windows(2).find(|w| w[0].2 + 1.0 > 0.0 && w[1].2 + 1.0 <= 0.0);
                let Some(w) = pair else {
                    if let Some(tl) = lost {
                        return Err(CascadeError::LostOrbit { t: tl, rank });
                    }
                    return Err(CascadeError::InvalidBracket {
                        reason: "no multiplier −1 crossing inside the bracket".into(),
                    });
                };
                let refined = refine_crossing::<f64>(
                    family,
                    path,
                    p,
                    -1.0,
                    (w[0].0, w[0].1),
                    (w[1].0, w[1].1),
                )
                .map(|r| (r.t, r.residual, r.width));
                finish(p, refined, EventKind::Flip)
            } else if pa == pb {
                if kind != EventKind::Tangent {
                    return Err(CascadeError::InvalidBracket {
                        reason: format!("both endpoints have period {pa}; no flip in bracket"),
                    });
                }
                let p = pa;
                for (from, far) in [((ta, xa), tb), ((tb, xb), ta)] {
                    let (samples, lost) = track_cycle(family, path, p, from, far);
                    if let Some(w) = samples
                        .windows(2)
                        .find(|w| (w[0].2 - 1.0) * (w[1].2 - 1.0) <= 0.0)
                    {
                        let mut refined = refine_crossing::<f64>(
                            family,
                            path,
                            p,
                            1.0,
                            (w[0].0, w[0].1),
                            (w[1].0, w[1].1),
                        )
                        .map(|r| (r.t, r.residual, r.width));
                        if let Some((t, residual, _)) = refined {
                            if residual > 1e-11 {
                                let _ = t;
                                refined = refine_crossing::<Dd>(
                                    family,
                                    path,
                                    p,
                                    1.0,
                                    (w[0].0, w[0].1),
                                    (w[1].0, w[1].1),
                                )
                                .map(|r| (r.t.to_f64(), r.residual, r.width))
                                .or(refined);
                            }
                        }
                        return finish(p, refined, EventKind::Tangent);
                    }
                    if let (Some(last), Some(tl)) = (samples.last(), lost) {
                        let refined = refine_fold_full(family, path, p, (last.0, last.1), tl);
                        return finish(p, refined, EventKind::Tangent);
                    }
                }
                Err(CascadeError::NoRoot { what: "multiplier +1 crossing in bracket".into() })
            } else {
                // periods in a non-doubling ratio: a periodic window is
                // born inside the bracket; refine against the end of the
                // higher-period branch
                if kind != EventKind::Tangent {
                    return Err(CascadeError::InvalidBracket {
                        reason: format!(
                            "endpoint periods {pa} and {pb} are not related by doubling"
                        ),
                    });
                }
                let (from, far, p) = if pa > pb { ((ta, xa), tb, pa) } else { ((tb, xb), ta, pb) };
                let (samples, lost) = track_cycle(family, path, p, from, far);
                match (samples.last(), lost) {
                    (Some(last), Some(tl)) => {
                        let refined = refine_fold_full(family, path, p, (last.0, last.1), tl);
                        finish(p, refined, EventKind::Tangent)
                    }
                    _ => Err(CascadeError::NoRoot {
                        what: "end of the periodic branch in bracket".into(),
                    }),
                }
            }
        }
        (periodic, other) if periodic.is_some() != other.is_some() => {
            if kind != EventKind::Tangent {
                return Err(CascadeError::InvalidBracket {
                    reason: "a flip bracket needs periodic attractors at both ends".into(),
                });
            }
            let (mut t_in, p, mut x_seed, mut t_out) = if let Some((p, x, _)) = periodic {
                (ta, p, x, tb)
            } else {
                let (p, x, _) = other.unwrap();
                (tb, p, x, ta)
            };
            // discrete bisection on the classification boundary
            while (t_out - t_in).abs() > 1e-6 * t_in.abs().max(1.0) {
                let mid = 0.5 * (t_in + t_out);
                let matches = match classify_attractor(family, path.point(mid), x_seed) {
                    Attractor::Periodic { period, orbit, .. } if period == p => Some(orbit[0]),
                    _ => None,
                };
                match matches {
                    Some(x) => {
                        t_in = mid;
                        x_seed = x;
                    }
                    None => t_out = mid,
                }
            }
            let refined = refine_fold_full(family, path, p, (t_in, x_seed), t_out);
            finish(p, refined, EventKind::Tangent)
        }
        _ => Err(CascadeError::InvalidBracket {
            reason: format!(
                "no periodic attractor at either end ({} / {})",
                ca.kind_name(),
                cb.kind_name()
            ),
        }),
    }
}

/// March a period-doubling cascade along a path, refining each flip.
/// `t_start` > `t_stop` runs the study toward decreasing t.
pub fn bifurcation_sequence(
    family: &MapFamily,
    path: &ParamPath,
    t_start: f64,
    t_stop: f64,
    count: u32,
    opts: &CascadeOptions,
) -> Result<BifurcationSequence, CascadeError> {
    if count == 0 || t_start == t_stop {
        return Err(CascadeError::InvalidBracket {
            reason: "need count ≥ 1 and a nonempty parameter range".into(),
        });
    }
    if t_stop > t_start {
        return run_cascade(family, path, t_start, t_stop, count, opts);
    }
    // decreasing study: negate the path coordinate so the march still
    // moves upward, then map events back
    let rpath = path.reversed();
    let mut seq = run_cascade(family, &rpath, -t_start, -t_stop, count, opts)?;
    for e in &mut seq.events {
        e.t = -e.t;
        e.params = path.point(e.t);
    }
    seq.path = *path;
    Ok(seq)
}

fn run_cascade(
    family: &MapFamily,
    path: &ParamPath,
    t0: f64,
    t_end: f64,
    count: u32,
    opts: &CascadeOptions,
) -> Result<BifurcationSequence, CascadeError> {
    let span = t_end - t0;
    let start_params = path.point(t0);
    let seed = opts
        .seed
        .or_else(|| default_seed(family, start_params))
        .ok_or(CascadeError::NoSeed)?;
    let att = classify_attractor(family, start_params, seed);
    let Some((base_period, x0, m0)) = attractor_period(&att) else {
        return Err(CascadeError::CascadeNotFound {
            t: t0,
            found: att.kind_name().into(),
        });
    };
    let mut p = base_period;
    let mut cur = (t0, x0, m0);
    let mut events: Vec<BifurcationEvent> = Vec::new();
    let mut budget = opts.march_budget;
    let mut note: Option<String> = None;

    'levels: for level in 0..count {
        let rank = level + 1;
        let pred_gap = match events.len() {
            0 => None,
            1 => Some((events[0].t - t0) * 0.25),
            n => Some((events[n - 1].t - events[n - 2].t) / 4.669),
        };
        let mut step = match pred_gap {
            Some(g) => (g / 4.0).max(span * 1e-12),
            None => opts.first_step.unwrap_or(span / 64.0),
        };
        let level_start = cur.0;
        let bracket;
        let mut shrinks = 0u32;
        loop {
            if budget == 0 {
                note = Some(format!("march budget exhausted at rank {rank}"));
                break 'levels;
            }
            budget -= 1;
            let tn = (cur.0 + step).min(t_end);
            if tn <= cur.0 {
                note = Some(format!("reached the end of the parameter range at rank {rank}"));
                break 'levels;
            }
            match polish_at::<f64>(family, path, p, tn, cur.1) {
                Some((x, m)) => {
                    shrinks = 0;
                    if m <= -1.0 {
                        bracket = (cur, tn, x, m);
                        break;
                    }
                    cur = (tn, x, m);
                    match pred_gap {
                        Some(g) => {
                            if cur.0 - level_start > g {
                                step *= 1.4;
                            }
                        }
                        None => {
                            if m > -0.6 {
                                step *= 1.25;
                            }
                        }
                    }
                    step = step.min(span / 8.0);
                    if tn >= t_end {
                        note = Some(format!(
                            "reached the end of the parameter range at rank {rank}"
                        ));
                        break 'levels;
                    }
                }
                None => {
                    shrinks += 1;
                    step *= 0.5;
                    if step < 1e-13 * cur.0.abs().max(1.0) || shrinks > 48 {
                        note = Some(format!("orbit lost near t={} at rank {rank}", cur.0));
                        break 'levels;
                    }
                }
            }
        }
        let (lo, hi_t, hi_x, hi_m) = bracket;
        let use_dd = opts.precision == Precision::DoubleDouble && rank > 9;
        let refined = if use_dd {
            refine_crossing::<Dd>(family, path, p, -1.0, (lo.0, lo.1), (hi_t, hi_x))
                .map(|r| (r.t.to_f64(), r.residual, r.width))
        } else {
            refine_crossing::<f64>(family, path, p, -1.0, (lo.0, lo.1), (hi_t, hi_x))
                .map(|r| (r.t, r.residual, r.width))
        };
        let Some((t_star, residual, width)) = refined else {
            note = Some(format!("flip refinement failed at rank {rank}"));
            break 'levels;
        };
        events.push(BifurcationEvent {
            t: t_star,
            params: path.point(t_star),
            kind: EventKind::Flip,
            period_before: p,
            residual,
            bracket_width: width,
        });
        let _ = hi_m;
        if rank < count {
            let n = events.len();
            let gap_est = if n >= 2 {
                (events[n - 1].t - events[n - 2].t) / 4.669
            } else {
                (events[0].t - t0) * 0.25
            };
            match settle_doubled(family, path, t_star, gap_est, p * 2, hi_x, t_end) {
                Some(next) => {
                    cur = next;
                    p *= 2;
                }
                None => {
                    note = Some(format!("could not settle the doubled orbit after rank {rank}"));
                    break 'levels;
                }
            }
        }
    }

    if events.is_empty() {
        return Err(CascadeError::CascadeNotFound {
            t: t_end,
            found: note.unwrap_or_else(|| "no flip inside the parameter range".into()),
        });
    }
    let complete = events.len() == count as usize;
    Ok(BifurcationSequence {
        path: *path,
        base_period,
        events,
        complete,
        note,
    })
}

/// Land on the stable doubled cycle just past a flip: hop ~35% of the
/// predicted next gap, iterate off the barely-unstable old orbit, then
/// polish at the doubled period.
fn settle_doubled(
    family: &MapFamily,
    path: &ParamPath,
    t_event: f64,
    gap_est: f64,
    p_new: u32,
    near_x: f64,
    t_end: f64,
) -> Option<(f64, f64, f64)> {
    let scale = near_x.abs().max(1e-3);
    for hop_mul in [0.35, 0.18, 0.7, 0.09, 0.045, 1.4] {
        let t = t_event + gap_est.abs() * hop_mul;
        if t >= t_end {
            continue;
        }
        let b = path.bindings::<f64>(t);
        for pert in [1e-6, 1e-4, 1e-8] {
            let x0 = family.domain.clamp_interior(near_x + pert * scale);
            let Some(x) = iterate_n(family, &b, x0, 20_000) else {
                continue;
            };
            let Some((orbit, m)) = polish_cycle(family, &b, p_new, x, 60) else {
                continue;
            };
            if minimal_period(&orbit, p_new) == p_new && m.abs() <= 1.0 + 1e-6 {
                return Some((t, orbit[0], m));
            }
        }
        // full classification as a fallback at this hop
        let seed = family.domain.clamp_interior(near_x + 1e-6 * scale);
        if let Attractor::Periodic { period, orbit, multiplier } =
            classify_attractor(family, path.point(t), seed)
        {
            if period == p_new {
                return Some((t, orbit[0], multiplier));
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct DeltaReport {
    /// The event parameter values the report was built from.
    pub params: Vec<f64>,
    /// Consecutive differences (N−1).
    pub gaps: Vec<f64>,
    /// δ_n = gap_n / gap_{n+1} (N−2).
    pub deltas: Vec<f64>,
    /// Geometric extrapolation b_N + gap_last/(δ_last − 1); None when the
    /// sequence is too short or not contracting.
    pub b_inf: Option<f64>,
    /// c_n = (b_∞ − b_{n−1})/(b_∞ − b_n) (N−1, when b_∞ exists).
    pub c_seq: Vec<f64>,
    /// d_n = (c_n − c_{n−1})/(c_{n+1} − c_n) (N−3, when b_∞ exists).
    pub d_seq: Vec<f64>,
    /// |gaps| strictly decreasing.
    pub gaps_monotone: bool,
    /// |δ_last − δ_prev| / |δ_last|, when two ratios exist.
    pub delta_spread: Option<f64>,
}

/// Ratio diagnostics over a monotone event sequence (flips, superstables,
/// or any parameter list in path order).
pub fn delta_report(params: &[f64]) -> Result<DeltaReport, CascadeError> {
    let n = params.len();
    let mut gaps = Vec::with_capacity(n.saturating_sub(1));
    for w in params.windows(2) {
        let g = w[1] - w[0];
        if g == 0.0 {
            return Err(CascadeError::DuplicateEvents);
        }
        gaps.push(g);
    }
    let mut deltas = Vec::with_capacity(gaps.len().saturating_sub(1));
    for w in gaps.windows(2) {
        deltas.push(w[0] / w[1]);
    }
    let b_inf = match (params.last(), gaps.last(), deltas.last()) {
        (Some(&bn), Some(&g), Some(&d)) if d > 1.0 + 1e-9 => {
            let v = bn + g / (d - 1.0);
            v.is_finite().then_some(v)
        }
        _ => None,
    };
    let mut c_seq = Vec::new();
    let mut d_seq = Vec::new();
    if let Some(bi) = b_inf {
        for w in params.windows(2) {
            c_seq.push((bi - w[0]) / (bi - w[1]));
        }
        let mut c_gaps = Vec::new();
        for w in c_seq.windows(2) {
            c_gaps.push(w[1] - w[0]);
        }
        for w in c_gaps.windows(2) {
            if w[1] != 0.0 {
                d_seq.push(w[0] / w[1]);
            }
        }
    }
    let gaps_monotone = gaps.windows(2).all(|w| w[1].abs() < w[0].abs());
    let delta_spread = if deltas.len() >= 2 {
        let d1 = deltas[deltas.len() - 1];
        let d0 = deltas[deltas.len() - 2];
        (d1 != 0.0).then(|| ((d1 - d0) / d1).abs())
    } else {
        None
    };
    Ok(DeltaReport {
        params: params.into(),
        gaps,
        deltas,
        b_inf,
        c_seq,
        d_seq,
        gaps_monotone,
        delta_spread,
    })
}

/// b_∞ / b₁ from a depth-`count` cascade along the path.
pub fn accumulation_ratio(
    family: &MapFamily,
    path: &ParamPath,
    t_start: f64,
    t_stop: f64,
    count: u32,
    opts: &CascadeOptions,
) -> Result<f64, CascadeError> {
    let seq = bifurcation_sequence(family, path, t_start, t_stop, count, opts)?;
    let report = delta_report(&seq.t_values())?;
    let b_inf = report.b_inf.ok_or(CascadeError::NoRoot {
        what: "accumulation extrapolation (sequence not contracting)".into(),
    })?;
    let b1 = seq.events[0].t;
    if b1 == 0.0 {
        return Err(CascadeError::NoRoot { what: "b₁ ≠ 0 for the accumulation ratio".into() });
    }
    Ok(b_inf / b1)
}

/// n applications of the map with domain policing; None on escape/fault.
fn iterate_n(family: &MapFamily, b: &Bindings<f64>, x0: f64, n: u64) -> Option<f64> {
    let mut x = x0;
    for k in 0..n {
        x = advance(family, b, x, k).ok()?;
    }
    Some(x)
}

/// Principal critical point of the map at fixed parameters, polished by
/// Newton on f′ from a guess.
fn critical_point_at(family: &MapFamily, b: &Bindings<f64>, guess: f64) -> Option<f64> {
    if let Body::SplitPow { .. } = family.body {
        return Some(0.0);
    }
    let mut x = family.domain.clamp_interior(guess);
    for _ in 0..60 {
        let j = family.eval_jet(x, b, 2).ok()?;
        if j.f2 == 0.0 {
            return None;
        }
        let dx = j.f1 / j.f2;
        x = family.domain.clamp_interior(x - dx);
        if !x.is_finite() {
            return None;
        }
        if dx.abs() <= 1e-15 * x.abs().max(1.0) {
            return Some(x);
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct SuperstableSequence {
    /// s_0 … s_N in path coordinates: s_n makes the critical point
    /// periodic with period 2^n.
    pub params: Vec<f64>,
    /// The flip events used to bracket them.
    pub flips: BifurcationSequence,
}

/// Solve f_t^{2^n}(x_c(t)) = x_c(t) for s_0 … s_N. Flips b_1 … b_{N+1}
/// are located first; s_n is bracketed by (b_n, b_{n+1}) and s_0 by a
/// downward expansion from the start of the range.
pub fn superstable_sequence(
    family: &MapFamily,
    path: &ParamPath,
    t_start: f64,
    t_stop: f64,
    n_levels: u32,
    opts: &CascadeOptions,
) -> Result<SuperstableSequence, CascadeError> {
    if t_stop < t_start {
        let rpath = path.reversed();
        let mut out =
            superstable_sequence(family, &rpath, -t_start, -t_stop, n_levels, opts)?;
        for s in &mut out.params {
            *s = -*s;
        }
        for e in &mut out.flips.events {
            e.t = -e.t;
            e.params = path.point(e.t);
        }
        out.flips.path = *path;
        return Ok(out);
    }
    let flips = bifurcation_sequence(family, path, t_start, t_stop, n_levels + 1, opts)?;
    if !flips.complete {
        return Err(CascadeError::NoRoot {
            what: format!("flips to rank {} for superstable brackets", n_levels + 1),
        });
    }
    let b = flips.t_values();
    let mut xc_guess = opts
        .seed
        .or_else(|| default_seed(family, path.point(t_start)))
        .ok_or(CascadeError::NoSeed)?;
    let gap_at = |n: u32, t: f64, guess: &mut f64| -> Option<f64> {
        let bind = path.bindings::<f64>(t);
        let xc = critical_point_at(family, &bind, *guess)?;
        *guess = xc;
        let y = iterate_n(family, &bind, xc, 1u64 << n)?;
        Some(y - xc)
    };

    let mut out = Vec::with_capacity(n_levels as usize + 1);
    // s_0: walk below the first flip until the fixed-point residual at
    // the critical point changes sign; if the residual stops being
    // evaluable (the map degenerates at small parameters), back off
    {
        let b1 = b[0];
        let mut hi = b1;
        let mut ghi = gap_at(0, hi, &mut xc_guess)
            .ok_or(CascadeError::NoRoot { what: "s₀ bracket".into() })?;
        if ghi == 0.0 {
            out.push(hi);
        } else {
            let mut step = (b1 - t_start).abs().max(1e-3 * b1.abs().max(1.0));
            let mut lo = t_start.min(hi - 1e-6 * step);
            let mut found = None;
            for _ in 0..60 {
                match gap_at(0, lo, &mut xc_guess) {
                    Some(g) if g == 0.0 => {
                        found = Some(lo);
                        break;
                    }
                    Some(g) if (g > 0.0) != (ghi > 0.0) => {
                        found = secant_root(
                            |t| gap_at(0, t, &mut xc_guess),
                            (lo, g),
                            (hi, ghi),
                        );
                        break;
                    }
                    Some(g) => {
                        hi = lo;
                        ghi = g;
                        step *= 2.0;
                        lo = hi - step;
                    }
                    None => {
                        step *= 0.5;
                        lo = hi - step;
                        if step < 1e-12 * hi.abs().max(1.0) {
                            break;
                        }
                    }
                }
            }
            out.push(found.ok_or(CascadeError::NoRoot { what: "s₀ bracket".into() })?);
        }
    }
    // s_n inside (b_n, b_{n+1})
    for n in 1..=n_levels {
        let (blo, bhi) = (b[(n - 1) as usize], b[n as usize]);
        let pad = (bhi - blo) * 1e-3;
        let mut found = None;
        for parts in [8usize, 32, 128] {
            let mut prev: Option<(f64, f64)> = None;
            for i in 0..=parts {
                let t = blo + pad + (bhi - blo - 2.0 * pad) * (i as f64 / parts as f64);
                let Some(g) = gap_at(n, t, &mut xc_guess) else {
                    prev = None;
                    continue;
                };
                if g == 0.0 {
                    found = Some(t);
                    break;
                }
                if let Some((tp, gp)) = prev {
                    if (gp > 0.0) != (g > 0.0) {
                        found = secant_root(
                            |t| gap_at(n, t, &mut xc_guess),
                            (tp, gp),
                            (t, g),
                        );
                        break;
                    }
                }
                prev = Some((t, g));
            }
            if found.is_some() {
                break;
            }
        }
        let s = found.ok_or(CascadeError::NoRoot { what: format!("s_{n}") })?;
        out.push(s);
    }
    Ok(SuperstableSequence { params: out, flips })
}

/// Safeguarded secant inside a sign-change bracket; `f` may fail at a
/// candidate (the bracket then shrinks by bisection).
fn secant_root(
    mut f: impl FnMut(f64) -> Option<f64>,
    mut s1: (f64, f64),
    mut s2: (f64, f64),
) -> Option<f64> {
    if s1.1 == 0.0 {
        return Some(s1.0);
    }
    if s2.1 == 0.0 {
        return Some(s2.0);
    }
    if (s1.1 > 0.0) == (s2.1 > 0.0) {
        return None;
    }
    let mut prev = s1;
    let mut last = s2;
    let mut stalls = 0u32;
    for _ in 0..120 {
        let width = (s2.0 - s1.0).abs();
        if width <= 1e-13 * s1.0.abs().max(1.0) {
            break;
        }
        let (lo, hi) = if s1.0 < s2.0 { (s1.0, s2.0) } else { (s2.0, s1.0) };
        let mid = 0.5 * (lo + hi);
        let denom = last.1 - prev.1;
        let mut cand = if denom != 0.0 && stalls < 4 {
            last.0 - last.1 * (last.0 - prev.0) / denom
        } else {
            mid
        };
        if !cand.is_finite() || cand <= lo || cand >= hi {
            cand = mid;
        }
        match f(cand) {
            Some(g) => {
                prev = last;
                last = (cand, g);
                if g == 0.0 {
                    return Some(cand);
                }
                if (g > 0.0) == (s1.1 > 0.0) {
                    if cand == s1.0 {
                        break;
                    }
                    s1 = (cand, g);
                    stalls = if cand == mid { 0 } else { stalls + 1 };
                } else {
                    if cand == s2.0 {
                        break;
                    }
                    s2 = (cand, g);
                    stalls = 0;
                }
            }
            None => {
                prev = last; // bisect next round
            }
        }
    }
    Some(0.5 * (s1.0 + s2.0))
}

/// Rank of the tine containing the critical point: A(1)=1,
/// A(n+1) = 2·A(n) + (−1)^{n+1}.
pub fn alpha_rank(n: u32) -> u64 {
    let mut a: u64 = 1;
    for k in 1..n {
        // A(k+1) = 2·A(k) + (−1)^{k+1}
        a = if k % 2 == 1 { 2 * a + 1 } else { 2 * a - 1 };
    }
    a
}

#[derive(Clone, Debug)]
pub struct TineReport {
    /// Cascade level: the orbit has 2^{level−1} points.
    pub level: u32,
    /// The orbit in dynamical order starting at the critical point.
    pub orbit: Vec<f64>,
    /// Distances between half-period partners (2^{level−2} of them):
    /// the widths of the forks ("tines") of the doubling tree.
    pub pair_widths: Vec<f64>,
    /// Consecutive gaps of the sorted orbit (2^{level−1} − 1).
    pub gaps: Vec<f64>,
    /// 1-based positions of the critical point's pair in the order given
    /// by `order`; expected (A(level−1), A(level−1)+1).
    pub alpha_ranks: (usize, usize),
    pub order: TineOrder,
}

/// Orbit-pair widths at a parameter point carrying a stable 2^{level−1}
/// cycle (normally a superstable parameter).
pub fn tine_widths(
    family: &MapFamily,
    params: ParamPoint,
    level: u32,
    seed: f64,
    order: TineOrder,
) -> Result<TineReport, CascadeError> {
    if level < 2 {
        return Err(CascadeError::InvalidBracket { reason: "level must be ≥ 2".into() });
    }
    let p_expected = 1u32 << (level - 1);
    let att = classify_attractor(family, params, seed);
    let Attractor::Periodic { period, orbit, .. } = att else {
        return Err(CascadeError::InvalidBracket {
            reason: format!("attractor is {}, not periodic", att.kind_name()),
        });
    };
    if period != p_expected {
        return Err(CascadeError::InvalidBracket {
            reason: format!("attractor has period {period}, expected {p_expected}"),
        });
    }
    let xc = default_seed(family, params).unwrap_or(seed);
    let anchor = orbit
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - xc).abs();
            let db = (b.1 - xc).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut orbit = orbit;
    orbit.rotate_left(anchor);
    let p = orbit.len();
    let half = p / 2;
    let pair_widths: Vec<f64> = (0..half).map(|i| (orbit[i] - orbit[i + half]).abs()).collect();
    let mut sorted = orbit.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    let gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    let rank_of = |x: f64| -> usize {
        match order {
            TineOrder::Ascending => 1 + orbit.iter().filter(|&&v| v < x).count(),
            TineOrder::Descending => 1 + orbit.iter().filter(|&&v| v > x).count(),
        }
    };
    let (r1, r2) = (rank_of(orbit[0]), rank_of(orbit[half]));
    let alpha_ranks = (r1.min(r2), r1.max(r2));
    Ok(TineReport {
        level,
        orbit,
        pair_widths,
        gaps,
        alpha_ranks,
        order,
    })
}

/// Cross-level width ratios: every level-n tine divided by every
/// level-(n+1) tine.
pub fn tine_ratio_table(coarse: &TineReport, fine: &TineReport) -> Vec<Vec<f64>> {
    coarse
        .pair_widths
        .iter()
        .map(|&w| fine.pair_widths.iter().map(|&v| w / v).collect())
        .collect()
}

/// Cascade plus δ diagnostics along an arbitrary straight line in the
/// (a, b) parameter plane.
pub fn directional_bifurcations(
    family: &MapFamily,
    base: ParamPoint,
    dir: (f64, f64),
    t_start: f64,
    t_stop: f64,
    count: u32,
    opts: &CascadeOptions,
) -> Result<(BifurcationSequence, DeltaReport), CascadeError> {
    if dir.0 == 0.0 && dir.1 == 0.0 {
        return Err(CascadeError::InvalidBracket { reason: "zero direction".into() });
    }
    let path = ParamPath::new(base, dir);
    let seq = bifurcation_sequence(family, &path, t_start, t_stop, count, opts)?;
    let report = delta_report(&seq.t_values())?;
    Ok((seq, report))
}

/// δ diagnostics for the piecewise family 1 − μ|x|^degree on [−1, 1]
/// (possibly asymmetric degrees), cascading in μ over (0, 2].
pub fn feigenvalue_for_degree(
    n_left: f64,
    n_right: f64,
    count: u32,
    precision: Precision,
) -> Result<(BifurcationSequence, DeltaReport), CascadeError> {
    let family = crate::catalog::feigenmap(n_left, n_right);
    let path = ParamPath::along_a();
    let opts = CascadeOptions {
        seed: Some(0.0),
        first_step: Some(0.02),
        precision,
        ..CascadeOptions::default()
    };
    let seq = bifurcation_sequence(&family, &path, 0.05, 2.0, count, &opts)?;
    let report = delta_report(&seq.t_values())?;
    Ok((seq, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn flips(name: &str, count: u32) -> BifurcationSequence {
        let entry = catalog::find(name).unwrap();
        let family = entry.family();
        let opts = CascadeOptions {
            seed: entry.hints.seed,
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        bifurcation_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            count,
            &opts,
        )
        .unwrap()
    }

    #[test]
    fn delta_report_arithmetic() {
        let r = delta_report(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.deltas, alloc::vec![1.0, 1.0]);
        assert!(r.b_inf.is_none());
        assert_eq!(
            delta_report(&[1.0, 1.0, 2.0]).unwrap_err(),
            CascadeError::DuplicateEvents
        );

        let four = [1.18336, 1.357, 1.3871, 1.39154];
        let r = delta_report(&four).unwrap();
        assert!((r.deltas[0] - 5.768770764119599).abs() < 1e-12);
        assert!((r.deltas[1] - 6.779279279279284).abs() < 1e-12);
        assert!((r.b_inf.unwrap() - 1.3923082618862042).abs() < 1e-12);
        assert_eq!(r.c_seq.len(), 3);
        assert_eq!(r.d_seq.len(), 1);

        // geometric sequence: extrapolation recovers the limit exactly
        let limit = 5.0;
        let seq: Vec<f64> = (0..8).map(|k| limit - 4.669f64.powi(-k)).collect();
        let r = delta_report(&seq).unwrap();
        assert!((r.b_inf.unwrap() - limit).abs() < 1e-9);
        assert!(r.gaps_monotone);
    }

    #[test]
    fn logistic_first_two_flips() {
        let seq = flips("logistic", 2);
        assert!(seq.complete);
        assert_eq!(seq.base_period, 1);
        let b = seq.t_values();
        assert!((b[0] - 3.0).abs() < 1e-9, "b1 = {}", b[0]);
        assert!((b[1] - 3.449489742783178).abs() < 1e-8, "b2 = {}", b[1]);
        for e in &seq.events {
            assert!(e.residual < 1e-10);
            assert_eq!(e.kind, EventKind::Flip);
        }
        assert_eq!(seq.events[0].period_before, 1);
        assert_eq!(seq.events[1].period_before, 2);
    }

    #[test]
    fn power_tower_first_flip_is_e_squared() {
        let seq = flips("xpow_a_over_x", 1);
        let b1 = seq.events[0].t;
        assert!((b1 - 7.38905609893065).abs() < 1e-7, "b1 = {b1}");
    }

    #[test]
    fn quadratic_kink_family_first_flip() {
        let (seq, _) = feigenvalue_for_degree(2.0, 2.0, 1, Precision::Double).unwrap();
        assert!((seq.events[0].t - 0.75).abs() < 1e-9);
    }

    #[test]
    fn feigenvalue_quadratic_rough() {
        let (_, report) = feigenvalue_for_degree(2.0, 2.0, 4, Precision::Double).unwrap();
        let d = *report.deltas.last().unwrap();
        assert!((d - 4.669).abs() < 0.25, "δ₂ = {d}");
    }

    #[test]
    fn decreasing_family_flips_and_orientation() {
        let entry = catalog::find("dec_selfexp").unwrap();
        let family = entry.family();
        let opts = CascadeOptions {
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        let seq = bifurcation_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            2,
            &opts,
        )
        .unwrap();
        let b = seq.t_values();
        assert!((b[0] - 0.350412683).abs() < 1e-6, "b1 = {}", b[0]);
        assert!((b[1] - 0.265910365).abs() < 1e-6, "b2 = {}", b[1]);

        // same study written with an explicitly negated direction
        let neg = bifurcation_sequence(
            &family,
            &ParamPath::new(ParamPoint::new(0.0, 0.0), (-1.0, 0.0)),
            -entry.hints.t0,
            -entry.hints.t_end,
            2,
            &opts,
        )
        .unwrap();
        for (e, f) in seq.events.iter().zip(neg.events.iter()) {
            assert!((e.params.a - f.params.a).abs() < 1e-10);
        }
    }

    #[test]
    fn find_flip_in_bracket() {
        let family = catalog::family("logistic").unwrap();
        let ev = find_bifurcation(
            &family,
            &ParamPath::along_a(),
            1,
            (2.5, 3.5),
            EventKind::Flip,
            None,
        )
        .unwrap();
        assert_eq!(ev.kind, EventKind::Flip);
        assert_eq!(ev.period_before, 1);
        assert!((ev.t - 3.0).abs() < 1e-10, "t = {}", ev.t);
        assert!(ev.residual < 1e-10);

        // endpoint order must not matter
        let swapped = find_bifurcation(
            &family,
            &ParamPath::along_a(),
            1,
            (3.5, 2.5),
            EventKind::Flip,
            None,
        )
        .unwrap();
        assert!((swapped.t - ev.t).abs() < 1e-10);
    }

    #[test]
    fn find_fold_in_bracket() {
        let family = catalog::family("fold_shift").unwrap();
        let ev = find_bifurcation(
            &family,
            &ParamPath::along_a(),
            1,
            (-0.6, 0.4),
            EventKind::Tangent,
            Some(0.1),
        )
        .unwrap();
        assert_eq!(ev.kind, EventKind::Tangent);
        assert!((ev.t + 0.25).abs() < 1e-8, "t = {}", ev.t);
        assert!(ev.residual < 1e-10, "residual = {}", ev.residual);
    }

    #[test]
    fn find_transcritical_and_pitchfork_tangents() {
        let tc = catalog::family("transcritical_normal").unwrap();
        let ev = find_bifurcation(
            &tc,
            &ParamPath::along_a(),
            1,
            (0.4, 1.6),
            EventKind::Tangent,
            None,
        )
        .unwrap();
        assert!((ev.t - 1.0).abs() < 1e-9, "transcritical t = {}", ev.t);
        assert!(ev.residual < 1e-10);

        let pf = catalog::family("pitchfork_normal").unwrap();
        let ev = find_bifurcation(
            &pf,
            &ParamPath::along_a(),
            1,
            (0.4, 1.6),
            EventKind::Tangent,
            None,
        )
        .unwrap();
        assert!((ev.t - 1.0).abs() < 1e-9, "pitchfork t = {}", ev.t);
    }

    #[test]
    fn window_birth_is_a_tangent() {
        let family = catalog::family("logistic").unwrap();
        let ev = find_bifurcation(
            &family,
            &ParamPath::along_a(),
            1,
            (3.80, 3.84),
            EventKind::Tangent,
            None,
        )
        .unwrap();
        let birth = 1.0 + 8.0f64.sqrt();
        assert_eq!(ev.period_before, 3);
        assert!((ev.t - birth).abs() < 1e-7, "t = {}, birth = {birth}", ev.t);
        assert!(ev.residual < 1e-10, "residual = {}", ev.residual);
    }

    #[test]
    fn no_cascade_reported_honestly() {
        let family = catalog::family("hump_pow").unwrap();
        let entry = catalog::find("hump_pow").unwrap();
        let err = bifurcation_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            1,
            &CascadeOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CascadeError::CascadeNotFound { .. }));
    }

    #[test]
    fn superstable_parameters_interleave_flips() {
        let family = catalog::family("logistic").unwrap();
        let entry = catalog::find("logistic").unwrap();
        let opts = CascadeOptions {
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        let ss = superstable_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            3,
            &opts,
        )
        .unwrap();
        let s = &ss.params;
        assert!((s[0] - 2.0).abs() < 1e-9, "s0 = {}", s[0]);
        assert!((s[1] - 3.23606797749979).abs() < 1e-8, "s1 = {}", s[1]);
        let b = ss.flips.t_values();
        for n in 1..=3usize {
            assert!(s[n - 1] < b[n - 1] && b[n - 1] < s[n], "interleaving at {n}");
        }
    }

    #[test]
    fn exponential_tower_superstable_orbits_pass_through_inverse_e() {
        let family = catalog::family("xpow_ax").unwrap();
        let entry = catalog::find("xpow_ax").unwrap();
        let opts = CascadeOptions {
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        let ss = superstable_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            2,
            &opts,
        )
        .unwrap();
        let inv_e = (-1.0f64).exp();
        for (n, &s) in ss.params.iter().enumerate() {
            let b = ParamPath::along_a().bindings::<f64>(s);
            let xc = critical_point_at(&family, &b, inv_e).unwrap();
            assert!(
                (xc - inv_e).abs() < 1e-9,
                "critical point at s_{n} = {s} is {xc}"
            );
            // the superstable orbit contains the critical point by
            // construction; check it closes back onto it
            let y = iterate_n(&family, &b, xc, 1u64 << n).unwrap();
            assert!((y - xc).abs() < 1e-9, "orbit defect {} at s_{n}", y - xc);
        }
    }

    #[test]
    fn alpha_rank_recurrence() {
        let want = [1u64, 3, 5, 11, 21, 43];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(alpha_rank(i as u32 + 1), w);
        }
    }

    #[test]
    fn logistic_tine_structure_and_alpha_ratio() {
        let family = catalog::family("logistic").unwrap();
        let entry = catalog::find("logistic").unwrap();
        let opts = CascadeOptions {
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        let ss = superstable_sequence(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            6,
            &opts,
        )
        .unwrap();
        let path = ParamPath::along_a();
        let s5 = ss.params[5];
        let s6 = ss.params[6];
        let coarse =
            tine_widths(&family, path.point(s5), 6, 0.5, TineOrder::Descending).unwrap();
        let fine =
            tine_widths(&family, path.point(s6), 7, 0.5, TineOrder::Descending).unwrap();
        assert_eq!(coarse.orbit.len(), 32);
        assert_eq!(coarse.pair_widths.len(), 16);
        assert_eq!(coarse.gaps.len(), 31);
        assert_eq!(fine.pair_widths.len(), 32);
        assert_eq!(coarse.alpha_ranks, (alpha_rank(5) as usize, alpha_rank(5) as usize + 1));
        assert_eq!(fine.alpha_ranks, (alpha_rank(6) as usize, alpha_rank(6) as usize + 1));
        // the critical point's own tine shrinks by the universal scaling
        // factor α ≈ 2.503 between consecutive levels
        let ratio = coarse.pair_widths[0] / fine.pair_widths[0];
        assert!((ratio - 2.503).abs() < 0.05, "α estimate {ratio}");
        let table = tine_ratio_table(&coarse, &fine);
        assert_eq!(table.len(), 16);
        assert_eq!(table[0].len(), 32);
    }

    #[test]
    fn accumulation_ratio_logistic() {
        let entry = catalog::find("logistic").unwrap();
        let family = entry.family();
        let opts = CascadeOptions {
            first_step: Some(entry.hints.first_step),
            ..CascadeOptions::default()
        };
        let r = accumulation_ratio(
            &family,
            &ParamPath::along_a(),
            entry.hints.t0,
            entry.hints.t_end,
            6,
            &opts,
        )
        .unwrap();
        assert!((r - 1.18998).abs() < 5e-4, "ratio = {r}");
    }

    #[test]
    fn double_double_refinement_of_the_exact_flip() {
        // fixed-point multiplier of a·x·(1−x) is 2 − a: the flip sits at
        // exactly 3, and double-double refinement should nail it far
        // below f64 resolution
        let family = catalog::family("logistic").unwrap();
        let path = ParamPath::along_a();
        let r = refine_crossing::<Dd>(
            &family,
            &path,
            1,
            -1.0,
            (2.9, 1.0 - 1.0 / 2.9),
            (3.1, 1.0 - 1.0 / 3.1),
        )
        .unwrap();
        let err = (r.t - Dd::from_f64(3.0)).abs().to_f64();
        assert!(err < 1e-25, "|t − 3| = {err:e}");
        assert!(r.residual < 1e-20, "residual = {:e}", r.residual);
    }
}
