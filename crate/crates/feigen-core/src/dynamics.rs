//! Orbit machinery: where a seed ends up, and how to tell what it found.

use crate::expr::Bindings;
use crate::family::{Domain, MapFamily, ParamPoint, OVERFLOW_GUARD};
use crate::real::Scalar;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub const TRANSIENT_STEPS: u64 = 100_000;
pub const LYAPUNOV_STEPS: u64 = 100_000;
/// mean log-derivative above this counts as chaotic
pub const LYAPUNOV_THRESHOLD: f64 = 1e-3;
/// relative orbit-closure tolerance for accepting a cycle
pub const CLOSURE_TOL: f64 = 1e-10;
/// relative tolerance for the raw cycle probe during the transient
pub const MATCH_TOL: f64 = 1e-13;
/// loose candidate threshold: a near-return this close is worth polishing
pub const CANDIDATE_TOL: f64 = 1e-6;
/// cycle probe window cap: periods up to 2^13 are detectable
pub const MAX_PROBE_WINDOW: u64 = 1 << 13;

#[derive(Clone, Debug, PartialEq)]
pub enum Attractor {
    Periodic {
        period: u32,
        /// dynamical order starting from the smallest element
        orbit: Vec<f64>,
        multiplier: f64,
    },
    Chaotic {
        lyapunov: f64,
    },
    Escaped {
        step: u64,
        last_x: f64,
    },
    Unresolved {
        reason: String,
    },
}

impl Attractor {
    pub fn period(&self) -> Option<u32> {
        match self {
            Attractor::Periodic { period, .. } => Some(*period),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Attractor::Periodic { .. } => "periodic",
            Attractor::Chaotic { .. } => "chaotic",
            Attractor::Escaped { .. } => "escaped",
            Attractor::Unresolved { .. } => "unresolved",
        }
    }
}

/// Orbit left the domain (or the map faulted) at a given step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Escape {
    pub step: u64,
    pub last_x: f64,
}

/// One application of the map with domain policing.
pub(crate) fn advance(
    family: &MapFamily,
    params: &Bindings<f64>,
    x: f64,
    step: u64,
) -> Result<f64, Escape> {
    match family.eval(x, params) {
        Ok(y) if family.domain.contains(y) => Ok(y),
        Ok(y) => Err(Escape {
            step,
            last_x: if y.is_finite() { y } else { x },
        }),
        Err(_) => Err(Escape { step, last_x: x }),
    }
}

/// f^p(x) and the cycle multiplier in one sweep; None on fault/overflow.
/// No domain check: Newton iterates may wander slightly outside.
pub(crate) fn sweep_cycle<S: Scalar>(
    family: &MapFamily,
    params: &Bindings<S>,
    p: u32,
    x0: S,
) -> Option<(S, S)> {
    let mut x = x0;
    let mut m = S::ONE;
    for _ in 0..p {
        let j = family.eval_jet(x, params, 1).ok()?;
        m = m * j.f1;
        x = j.f;
        if !(x.is_finite() && x.abs().to_f64() <= OVERFLOW_GUARD) {
            return None;
        }
    }
    Some((x, m))
}

/// Newton-polish a period-p point from a guess. Returns the orbit in
/// dynamical order from the smallest element, plus the multiplier.
pub(crate) fn polish_cycle<S: Scalar>(
    family: &MapFamily,
    params: &Bindings<S>,
    p: u32,
    guess: S,
    max_iter: u32,
) -> Option<(Vec<S>, S)> {
    let mut x = guess;
    let mut converged = false;
    // one extra step after convergence lands superstable points exactly
    let mut extra = false;
    for _ in 0..max_iter + 1 {
        let (fx, m) = sweep_cycle(family, params, p, x)?;
        let g = fx - x;
        // p compositions of f leave ~p·eps of roundoff in g; below that
        // floor Newton just bounces on the rounding staircase
        let g_floor = (4.0 * p as f64 + 16.0) * S::EPS * x.abs().to_f64().max(1.0);
        if g.abs().to_f64() <= g_floor {
            converged = true;
            break;
        }
        let denom = m - S::ONE;
        if denom.abs().to_f64() < 1e-9 {
            // near-tangent cycle: Newton is blind here
            if g.abs().to_f64() < 1e-12 * x.abs().to_f64().max(1.0) {
                converged = true;
            }
            break;
        }
        let dx = g / denom;
        x = x - dx;
        if !x.is_finite() {
            return None;
        }
        if extra {
            converged = true;
            break;
        }
        let eps = S::EPS.to_f64();
        if dx.abs().to_f64() <= 8.0 * eps * x.abs().to_f64().max(1.0) {
            extra = true;
        }
    }
    if !converged {
        return None;
    }
    collect_cycle(family, params, p, x)
}

fn collect_cycle<S: Scalar>(
    family: &MapFamily,
    params: &Bindings<S>,
    p: u32,
    x0: S,
) -> Option<(Vec<S>, S)> {
    let mut orbit = Vec::with_capacity(p as usize);
    let mut x = x0;
    let mut m = S::ONE;
    for _ in 0..p {
        orbit.push(x);
        let j = family.eval_jet(x, params, 1).ok()?;
        m = m * j.f1;
        x = j.f;
        if !x.is_finite() {
            return None;
        }
    }
    // rotate so the smallest element leads
    let mut lead = 0;
    for (i, v) in orbit.iter().enumerate() {
        if v.to_f64() < orbit[lead].to_f64() {
            lead = i;
        }
    }
    orbit.rotate_left(lead);
    Some((orbit, m))
}

/// A cycle through a critical point has multiplier exactly 0, but the
/// polished orbit sits wherever the floating-point map has its fixed
/// point — possibly an ulp away, leaving a ~1e-16 multiplier. When the
/// multiplier is already tiny, re-thread the orbit through the nearby
/// zero of f' if that keeps the cycle closed.
fn snap_superstable(
    family: &MapFamily,
    b: &Bindings<f64>,
    p: u32,
    orbit: Vec<f64>,
    m: f64,
) -> (Vec<f64>, f64) {
    if !(m.abs() < 1e-9) || orbit.is_empty() {
        return (orbit, m);
    }
    // orbit point with the flattest derivative
    let mut i_min = 0;
    let mut d_min = f64::INFINITY;
    for (i, &x) in orbit.iter().enumerate() {
        if let Ok(j) = family.eval_jet(x, b, 1) {
            if j.f1.abs() < d_min {
                d_min = j.f1.abs();
                i_min = i;
            }
        }
    }
    // Newton toward f' = 0
    let mut xc = orbit[i_min];
    for _ in 0..8 {
        let Ok(j) = family.eval_jet(xc, b, 2) else {
            return (orbit, m);
        };
        if j.f1 == 0.0 || j.f2 == 0.0 {
            break;
        }
        let dx = j.f1 / j.f2;
        xc -= dx;
        if dx.abs() <= f64::EPSILON * xc.abs().max(1.0) {
            break;
        }
    }
    // look for a neighbouring double where f' computes to exactly zero
    let mut flat = None;
    let mut probe = xc;
    for _ in 0..3 {
        if family.eval_jet(probe, b, 1).is_ok_and(|j| j.f1 == 0.0) {
            flat = Some(probe);
            break;
        }
        probe = probe.next_up();
    }
    if flat.is_none() {
        probe = xc.next_down();
        for _ in 0..3 {
            if family.eval_jet(probe, b, 1).is_ok_and(|j| j.f1 == 0.0) {
                flat = Some(probe);
                break;
            }
            probe = probe.next_down();
        }
    }
    let Some(xc) = flat else {
        return (orbit, m);
    };
    if (xc - orbit[i_min]).abs() > 1e-10 * xc.abs().max(1.0) {
        return (orbit, m);
    }
    match collect_cycle(family, b, p, xc) {
        Some((snapped, sm))
            if closure_defect(family, b, &snapped) < CLOSURE_TOL && sm.abs() < 1e-9 =>
        {
            (snapped, sm)
        }
        _ => (orbit, m),
    }
}

fn closure_defect(family: &MapFamily, params: &Bindings<f64>, orbit: &[f64]) -> f64 {
    let mut worst: f64 = f64::INFINITY;
    if orbit.is_empty() {
        return worst;
    }
    worst = 0.0;
    for i in 0..orbit.len() {
        let next = orbit[(i + 1) % orbit.len()];
        match family.eval(orbit[i], params) {
            Ok(y) => {
                let d = (y - next).abs() / next.abs().max(1.0);
                if d > worst {
                    worst = d;
                }
            }
            Err(_) => return f64::INFINITY,
        }
    }
    worst
}

/// Smallest d dividing p that already closes the polished cycle.
pub(crate) fn minimal_period(orbit: &[f64], p: u32) -> u32 {
    let n = p as usize;
    'outer: for d in 1..=p {
        if p % d != 0 {
            continue;
        }
        let dd = d as usize;
        for i in 0..n {
            let a = orbit[i];
            let b = orbit[(i + dd) % n];
            if (a - b).abs() > 1e-8 * a.abs().max(1.0) {
                continue 'outer;
            }
        }
        return d;
    }
    p
}

pub fn classify_attractor(family: &MapFamily, params: ParamPoint, seed: f64) -> Attractor {
    let b: Bindings<f64> = params.bindings();
    let mut x = family.domain.clamp_interior(seed);

    // Transient with an in-flight cycle probe: keep a snapshot whose age
    // doubles (so any period up to the window cap is eventually compared),
    // remember the closest near-return as a fallback candidate.
    let mut snap = x;
    let mut snap_step = 0u64;
    let mut window = 1u64;
    let mut exact: Option<u64> = None;
    let mut near: Option<(u64, f64)> = None; // (lag, rel distance)
    let mut step = 0u64;
    while step < TRANSIENT_STEPS {
        step += 1;
        x = match advance(family, &b, x, step) {
            Ok(y) => y,
            Err(e) => {
                return Attractor::Escaped {
                    step: e.step,
                    last_x: e.last_x,
                }
            }
        };
        let lag = step - snap_step;
        let d = (x - snap).abs() / x.abs().max(1.0);
        if d < MATCH_TOL {
            exact = Some(lag);
            break;
        }
        if near.map_or(true, |(_, nd)| d < nd) {
            near = Some((lag, d));
        }
        if lag >= window {
            snap = x;
            snap_step = step;
            if window < MAX_PROBE_WINDOW {
                window *= 2;
            }
        }
    }

    let candidate = exact.or(match near {
        Some((lag, d)) if d < CANDIDATE_TOL => Some(lag),
        _ => None,
    });

    if let Some(p_raw) = candidate {
        if p_raw <= MAX_PROBE_WINDOW {
            if let Some((orbit, _)) = polish_cycle(family, &b, p_raw as u32, x, 60) {
                let p_min = minimal_period(&orbit, p_raw as u32);
                if let Some((orbit, m)) = polish_cycle(family, &b, p_min, orbit[0], 40) {
                    let (orbit, m) = snap_superstable(family, &b, p_min, orbit, m);
                    let defect = closure_defect(family, &b, &orbit);
                    if defect < CLOSURE_TOL && m.abs() <= 1.0 + 1e-9 {
                        return Attractor::Periodic {
                            period: p_min,
                            orbit,
                            multiplier: m,
                        };
                    }
                }
            }
        }
    }

    // No workable cycle: measure stretching instead.
    match lyapunov_from(family, &b, x, LYAPUNOV_STEPS, step) {
        Ok(est) => {
            if est.lambda > LYAPUNOV_THRESHOLD {
                Attractor::Chaotic {
                    lyapunov: est.lambda,
                }
            } else {
                Attractor::Unresolved {
                    reason: format!(
                        "no cycle up to 2^13 and lyapunov {:.3e} below threshold",
                        est.lambda
                    ),
                }
            }
        }
        Err(e) => Attractor::Escaped {
            step: e.step,
            last_x: e.last_x,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub steps_used: u64,
    /// steps skipped because the derivative vanished exactly
    pub zero_derivative_skips: u64,
}

fn lyapunov_from(
    family: &MapFamily,
    params: &Bindings<f64>,
    x0: f64,
    steps: u64,
    step_offset: u64,
) -> Result<LyapunovEstimate, Escape> {
    let mut x = x0;
    let mut sum = 0.0;
    let mut used = 0u64;
    let mut skipped = 0u64;
    for k in 0..steps {
        let j = family
            .eval_jet(x, params, 1)
            .map_err(|_| Escape {
                step: step_offset + k + 1,
                last_x: x,
            })?;
        if j.f1 == 0.0 {
            skipped += 1;
        } else {
            sum += j.f1.abs().ln();
            used += 1;
        }
        x = j.f;
        if !family.domain.contains(x) {
            return Err(Escape {
                step: step_offset + k + 1,
                last_x: if x.is_finite() { x } else { f64::NAN },
            });
        }
    }
    Ok(LyapunovEstimate {
        lambda: if used > 0 { sum / used as f64 } else { 0.0 },
        steps_used: used,
        zero_derivative_skips: skipped,
    })
}

/// Mean log-derivative along the orbit from `seed` after a short settle.
pub fn lyapunov_estimate(
    family: &MapFamily,
    params: ParamPoint,
    seed: f64,
    steps: u64,
) -> Result<LyapunovEstimate, Escape> {
    let b: Bindings<f64> = params.bindings();
    let mut x = family.domain.clamp_interior(seed);
    let settle = (TRANSIENT_STEPS / 10).max(1_000);
    for k in 0..settle {
        x = advance(family, &b, x, k + 1)?;
    }
    lyapunov_from(family, &b, x, steps, settle)
}

/// exp(mean ln x_i); None when a point is not strictly positive.
pub fn geometric_mean(points: &[f64]) -> Option<f64> {
    if points.is_empty() {
        return None;
    }
    let mut sum = 0.0;
    for &x in points {
        if x <= 0.0 {
            return None;
        }
        sum += x.ln();
    }
    Some((sum / points.len() as f64).exp())
}

/// (min, max) of the orbit after settling; a cheap support estimate.
pub fn orbit_support(
    family: &MapFamily,
    params: ParamPoint,
    seed: f64,
    samples: u64,
) -> Result<(f64, f64), Escape> {
    let b: Bindings<f64> = params.bindings();
    let mut x = family.domain.clamp_interior(seed);
    let settle = TRANSIENT_STEPS / 10;
    for k in 0..settle {
        x = advance(family, &b, x, k + 1)?;
    }
    let mut lo = x;
    let mut hi = x;
    for k in 0..samples {
        x = advance(family, &b, x, settle + k + 1)?;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CritKind {
    Maximum,
    Minimum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub value: f64,
    pub kind: CritKind,
    /// lowest non-vanishing derivative order; 8 means 8 or higher
    pub degree: u32,
    /// probe ratio did not sit near an integer power
    pub fractional: bool,
}

const CRIT_GRID: usize = 4096;

/// Interior extrema of x → f(x) at fixed parameters, by sign changes of
/// f' on a 4096-point grid refined by bisection. Odd-degree saddles do
/// not flip the sign of f' and are deliberately not hunted.
pub fn find_critical_points(
    family: &MapFamily,
    params: ParamPoint,
    lo: f64,
    hi: f64,
) -> Vec<CriticalPoint> {
    let b: Bindings<f64> = params.bindings();
    let inset = (hi - lo) * 1e-9;
    let (lo, hi) = (lo + inset, hi - inset);
    let h = (hi - lo) / CRIT_GRID as f64;
    let d1 = |x: f64| -> Option<f64> {
        family.eval_jet(x, &b, 1).ok().map(|j| j.f1)
    };
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=CRIT_GRID {
        let x = lo + i as f64 * h;
        let Some(fx1) = d1(x) else {
            prev = None;
            continue;
        };
        if fx1 == 0.0 {
            // the node itself is critical; probe a flank for the kind
            let flank = d1(x - 0.5 * h).or_else(|| d1(x + 0.5 * h).map(|d| -d));
            if let Some(dl) = flank {
                if let Some(cp) = finish_critical(family, &b, x, dl, lo, hi) {
                    out.push(cp);
                }
            }
            prev = Some((x, fx1));
            continue;
        }
        if let Some((px, pd)) = prev {
            if pd != 0.0 && pd * fx1 < 0.0 {
                if let Some(cp) = refine_critical(family, &b, px, x, pd, lo, hi) {
                    out.push(cp);
                }
            }
        }
        prev = Some((x, fx1));
    }
    out
}

fn refine_critical(
    family: &MapFamily,
    b: &Bindings<f64>,
    mut xa: f64,
    mut xb: f64,
    entry_da: f64,
    lo: f64,
    hi: f64,
) -> Option<CriticalPoint> {
    let span = hi - lo;
    let mut da = entry_da;
    for _ in 0..80 {
        if (xb - xa).abs() <= 1e-12 * span.max(1.0) {
            break;
        }
        let mid = 0.5 * (xa + xb);
        let dm = family.eval_jet(mid, b, 1).ok()?.f1;
        if dm == 0.0 {
            xa = mid;
            xb = mid;
            break;
        }
        if da * dm < 0.0 {
            xb = mid;
        } else {
            xa = mid;
            da = dm;
        }
    }
    finish_critical(family, b, 0.5 * (xa + xb), entry_da, lo, hi)
}

fn finish_critical(
    family: &MapFamily,
    b: &Bindings<f64>,
    x0: f64,
    left_slope: f64,
    lo: f64,
    hi: f64,
) -> Option<CriticalPoint> {
    let j = family.eval_jet(x0, b, 3).ok()?;
    // the sign of f' flips + → − at a maximum
    let kind = if left_slope > 0.0 {
        CritKind::Maximum
    } else {
        CritKind::Minimum
    };
    let (degree, fractional) = estimate_degree(family, b, x0, j.f, j.f2, lo, hi);
    Some(CriticalPoint {
        x: x0,
        value: j.f,
        kind,
        degree,
        fractional,
    })
}

fn estimate_degree(
    family: &MapFamily,
    b: &Bindings<f64>,
    x0: f64,
    f0: f64,
    f2: f64,
    lo: f64,
    hi: f64,
) -> (u32, bool) {
    let span = hi - lo;
    let h = (span * 5e-3).min((hi - x0).min(x0 - lo).abs() / 2.5).max(span * 1e-5);
    let probe = |x: f64| family.eval(x, b).ok();
    let (Some(f1h), Some(f2h)) = (probe(x0 + h), probe(x0 + 2.0 * h)) else {
        return (2, false);
    };
    let d1 = f1h - f0;
    let d2 = f2h - f0;
    // quadratic term dominates the probe displacement: trust the jet
    if (0.5 * f2 * h * h).abs() >= 0.25 * d1.abs() && f2 != 0.0 {
        return (2, false);
    }
    if d1 == 0.0 || d2 == 0.0 {
        return (8, false);
    }
    let r = d2 / d1;
    if r <= 1.0 {
        return (8, false);
    }
    let est = libm_log2(r);
    let rounded = crate::real::round(est);
    let fractional = (est - rounded).abs() > 0.2;
    let deg = rounded.clamp(2.0, 8.0) as u32;
    (deg, fractional)
}

fn libm_log2(x: f64) -> f64 {
    Scalar::ln(x) / core::f64::consts::LN_2
}

/// Where to seed an attractor hunt: the dominant interior extremum (the
/// highest maximum, or failing that the lowest minimum).
pub fn default_seed(family: &MapFamily, params: ParamPoint) -> Option<f64> {
    let (lo, hi) = match family.domain {
        Domain::Interval(lo, hi) => (lo, hi),
        Domain::SemiLine(lo) => (lo, lo + 49.0),
        Domain::Real => return None,
    };
    let crits = find_critical_points(family, params, lo, hi);
    let best_max = crits
        .iter()
        .filter(|c| c.kind == CritKind::Maximum)
        .max_by(|a, b| a.value.total_cmp(&b.value));
    if let Some(c) = best_max {
        return Some(c.x);
    }
    crits
        .iter()
        .filter(|c| c.kind == CritKind::Minimum)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|c| c.x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinctAttractor {
    pub attractor: Attractor,
    pub support: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanCell {
    pub lo: f64,
    pub hi: f64,
    /// index into `LocalScanReport::attractors`
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalScanReport {
    pub attractors: Vec<DistinctAttractor>,
    /// adjacent cells landing on the same attractor are merged
    pub cells: Vec<ScanCell>,
}

fn same_attractor(a: &DistinctAttractor, b: &DistinctAttractor) -> bool {
    match (&a.attractor, &b.attractor) {
        (
            Attractor::Periodic {
                period: p1,
                orbit: o1,
                ..
            },
            Attractor::Periodic {
                period: p2,
                orbit: o2,
                ..
            },
        ) => {
            if p1 != p2 {
                return false;
            }
            let mut s1: Vec<f64> = o1.clone();
            let mut s2: Vec<f64> = o2.clone();
            s1.sort_by(f64::total_cmp);
            s2.sort_by(f64::total_cmp);
            s1.iter()
                .zip(&s2)
                .all(|(x, y)| (x - y).abs() <= 1e-6 * x.abs().max(1.0))
        }
        (Attractor::Chaotic { .. }, Attractor::Chaotic { .. }) => {
            let mid = |s: (f64, f64)| 0.5 * (s.0 + s.1);
            let inside = |m: f64, s: (f64, f64)| m >= s.0 && m <= s.1;
            inside(mid(a.support), b.support) && inside(mid(b.support), a.support)
        }
        (Attractor::Escaped { .. }, Attractor::Escaped { .. }) => true,
        (Attractor::Unresolved { .. }, Attractor::Unresolved { .. }) => true,
        _ => false,
    }
}

/// Classify the attractor reached from each cell of a state-space
/// interval at fixed parameters. Adjacent cells falling to the same
/// attractor merge; distinct attractors are kept once each.
pub fn scan_local_attractors(
    family: &MapFamily,
    params: ParamPoint,
    lo: f64,
    hi: f64,
    cells: u32,
) -> LocalScanReport {
    let mut report = LocalScanReport {
        attractors: Vec::new(),
        cells: Vec::new(),
    };
    if !(hi > lo) || cells == 0 {
        return report;
    }
    let w = (hi - lo) / cells as f64;
    for i in 0..cells {
        let c_lo = lo + i as f64 * w;
        let c_hi = c_lo + w;
        let seed = 0.5 * (c_lo + c_hi);
        let attractor = classify_attractor(family, params, seed);
        let support = match &attractor {
            Attractor::Periodic { orbit, .. } => {
                let mut s = (orbit[0], orbit[0]);
                for &x in orbit {
                    s.0 = s.0.min(x);
                    s.1 = s.1.max(x);
                }
                s
            }
            Attractor::Chaotic { .. } => {
                orbit_support(family, params, seed, 4096).unwrap_or((seed, seed))
            }
            _ => (seed, seed),
        };
        let cand = DistinctAttractor { attractor, support };
        let idx = match report.attractors.iter().position(|d| same_attractor(d, &cand)) {
            Some(i) => i,
            None => {
                report.attractors.push(cand);
                report.attractors.len() - 1
            }
        };
        match report.cells.last_mut() {
            Some(cell) if cell.index == idx && (cell.hi - c_lo).abs() < 1e-12 => {
                cell.hi = c_hi;
            }
            _ => report.cells.push(ScanCell {
                lo: c_lo,
                hi: c_hi,
                index: idx,
            }),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn logistic() -> MapFamily {
        catalog::family("logistic").unwrap()
    }

    fn at(a: f64) -> ParamPoint {
        ParamPoint::new(a, 0.0)
    }

    #[test]
    fn logistic_superstable_fixed_point() {
        match classify_attractor(&logistic(), at(2.0), 0.3) {
            Attractor::Periodic {
                period,
                orbit,
                multiplier,
            } => {
                assert_eq!(period, 1);
                assert!((orbit[0] - 0.5).abs() < 1e-12);
                assert_eq!(multiplier, 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn logistic_two_cycle_orbit_and_multiplier() {
        // period-2 multiplier of the logistic map is -a^2 + 2a + 4
        match classify_attractor(&logistic(), at(3.2), 0.3) {
            Attractor::Periodic {
                period,
                orbit,
                multiplier,
            } => {
                assert_eq!(period, 2);
                assert!((orbit[0] - 0.5130445095).abs() < 1e-6);
                assert!((orbit[1] - 0.7994554905).abs() < 1e-6);
                assert!((multiplier - 0.16).abs() < 1e-9, "{multiplier}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn logistic_deep_cycle_and_odd_window() {
        assert_eq!(
            classify_attractor(&logistic(), at(3.55), 0.3).period(),
            Some(8)
        );
        // the period-3 window opens by tangency at a = 1 + sqrt(8)
        let a3 = 1.0 + 8.0_f64.sqrt();
        match classify_attractor(&logistic(), at(a3), 0.5) {
            Attractor::Periodic {
                period, multiplier, ..
            } => {
                assert_eq!(period, 3);
                assert!((multiplier - 1.0).abs() < 1e-3, "{multiplier}");
            }
            other => panic!("{other:?}"),
        }
        // and deeper inside it sits the superstable 3-cycle
        match classify_attractor(&logistic(), at(3.8318740552833155), 0.5) {
            Attractor::Periodic {
                period, multiplier, ..
            } => {
                assert_eq!(period, 3);
                assert!(multiplier.abs() < 1e-6, "{multiplier}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn logistic_chaos_and_escape() {
        match classify_attractor(&logistic(), at(3.7), 0.3) {
            Attractor::Chaotic { lyapunov } => assert!(lyapunov > 0.1, "{lyapunov}"),
            other => panic!("{other:?}"),
        }
        match classify_attractor(&logistic(), at(5.0), 0.3) {
            Attractor::Escaped { step, last_x } => {
                assert!(step < 100);
                assert!(!(0.0..=1.0).contains(&last_x));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gamma_symmetric_pair_of_two_cycles() {
        let g = catalog::family("gamma_sine").unwrap();
        let plus = classify_attractor(&g, at(0.7), 0.5);
        let minus = classify_attractor(&g, at(0.7), -0.5);
        let (Attractor::Periodic { orbit: o1, period: 2, .. },
             Attractor::Periodic { orbit: o2, period: 2, .. }) = (&plus, &minus)
        else {
            panic!("{plus:?} / {minus:?}");
        };
        // odd map: the two attractors mirror through 0
        let mut neg: Vec<f64> = o2.iter().map(|x| -x).collect();
        neg.sort_by(f64::total_cmp);
        let mut pos = o1.clone();
        pos.sort_by(f64::total_cmp);
        for (x, y) in pos.iter().zip(&neg) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn decreasing_family_escapes_below_the_cliff() {
        let f = catalog::family("dec_selfexp").unwrap();
        match classify_attractor(&f, at(0.2), 0.5) {
            Attractor::Escaped { .. } => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orbit_geometric_mean_recovers_the_parameter() {
        let f = catalog::family("xpow_a_over_x").unwrap();
        match classify_attractor(&f, at(8.0), 2.7) {
            Attractor::Periodic { orbit, period, .. } => {
                assert_eq!(period, 2);
                let g = geometric_mean(&orbit).unwrap();
                assert!((g - 8.0).abs() < 8.0 * 1e-9, "{g}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn critical_points_of_stock_maps() {
        let l = logistic();
        let cs = find_critical_points(&l, at(3.0), 0.0, 1.0);
        assert_eq!(cs.len(), 1);
        assert!((cs[0].x - 0.5).abs() < 1e-9);
        assert_eq!((cs[0].kind, cs[0].degree), (CritKind::Maximum, 2));

        let o = catalog::family("octic_two_max").unwrap();
        let cs = find_critical_points(&o, at(3.0), 0.0, 1.0);
        let maxima: Vec<_> = cs.iter().filter(|c| c.kind == CritKind::Maximum).collect();
        assert_eq!(maxima.len(), 2);
        assert!((maxima[1].x - 0.80045).abs() < 1e-3, "{}", maxima[1].x);
        assert!(maxima[1].value > maxima[0].value);

        let f4 = catalog::feigenmap(4.0, 4.0);
        let cs = find_critical_points(&f4, at(1.0), -1.0, 1.0);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].x.abs() < 1e-9);
        assert_eq!((cs[0].kind, cs[0].degree), (CritKind::Maximum, 4));
        assert!(!cs[0].fractional);
    }

    #[test]
    fn default_seed_picks_the_dominant_maximum() {
        let o = catalog::family("octic_two_max").unwrap();
        let s = default_seed(&o, at(3.0)).unwrap();
        assert!((s - 0.80045).abs() < 1e-3);
        // minimum-shaped family falls back to the valley
        let f = catalog::family("xpow_ax").unwrap();
        let s = default_seed(&f, at(6.0)).unwrap();
        assert!((s - core::f64::consts::E.recip()).abs() < 1e-6);
    }
}
