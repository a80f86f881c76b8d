//! Conjecture suites over map families: pairwise bifurcation-point
//! agreement ("permeability" of the parameter through a composition),
//! universality of the cascade ratio, several-maxima behavior, and
//! deterministic batch execution.

use std::time::Instant;

use feigen_core::bifurcation::{
    bifurcation_sequence, delta_report, feigenvalue_for_degree, find_bifurcation, CascadeError,
    CascadeOptions, EventKind, ParamPath, Precision,
};
use feigen_core::dynamics::{
    classify_attractor, default_seed, find_critical_points, orbit_support, Attractor, CritKind,
    CriticalPoint,
};
use feigen_core::family::{parse_family, Domain, MapFamily, Orientation, ParamPoint};
use feigen_core::schwarzian::check_bifurcation_readiness;
use rand::Rng;
use rand::SeedableRng;
use rayon::prelude::*;

/// Limit gap ratio for cascades pivoting on a quadratic maximum.
pub const QUADRATIC_RATIO: f64 = 4.669201609102990;
/// Limit gap ratio for degree-4 maxima.
pub const QUARTIC_RATIO: f64 = 7.2846862171;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Confirm,
    Refute,
    NoChaos,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Confirm => "confirm",
            Expectation::Refute => "refute",
            Expectation::NoChaos => "nochaos",
        }
    }

    pub fn from_name(s: &str) -> Option<Expectation> {
        Some(match s {
            "confirm" => Expectation::Confirm,
            "refute" => Expectation::Refute,
            "nochaos" => Expectation::NoChaos,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChaosCell {
    pub t: f64,
    /// which maximum seeded the chaotic local orbit
    pub seed: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiMaxStep {
    pub t: f64,
    /// one short label per maximum: "period-4", "chaotic", ...
    pub attractors: Vec<String>,
    pub global: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiMaxSummary {
    pub labels: Vec<String>,
    pub steps: Vec<MultiMaxStep>,
    /// every sampled parameter had all seeds on one attractor
    pub all_global: bool,
    /// first flip parameter of the cascade seeded from each maximum
    pub first_flips: Vec<Option<f64>>,
    pub faster: Option<String>,
    /// final gap ratio of the shared cascade, when global
    pub delta: Option<f64>,
    pub chaos_cells: Vec<ChaosCell>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Confirmed {
        first: Vec<f64>,
        second: Vec<f64>,
        max_gap: f64,
    },
    Refuted {
        rank: u32,
        gap: f64,
        first: Vec<f64>,
        second: Vec<f64>,
    },
    Supports {
        delta: f64,
        reference: f64,
        rel_err: f64,
        degree: u32,
    },
    Refutes {
        delta: f64,
        reference: f64,
        rel_err: f64,
        degree: u32,
    },
    NoChaos,
    MultiMax(MultiMaxSummary),
    Inconclusive {
        reason: String,
    },
}

impl Outcome {
    pub fn verdict(&self) -> &'static str {
        match self {
            Outcome::Confirmed { .. } => "confirmed",
            Outcome::Refuted { .. } => "refuted",
            Outcome::Supports { .. } => "supports",
            Outcome::Refutes { .. } => "refutes",
            Outcome::NoChaos => "no-chaos",
            Outcome::MultiMax(_) => "multimax",
            Outcome::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_refutation(&self) -> bool {
        matches!(self, Outcome::Refuted { .. } | Outcome::Refutes { .. })
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub outcome: Outcome,
    pub notes: Vec<String>,
    pub expect: Option<Expectation>,
    pub met: Option<bool>,
    pub seed: Option<u64>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn all_met(&self) -> bool {
        self.cases.iter().all(|c| c.met != Some(false))
    }

    pub fn unexpected_refutation(&self) -> bool {
        self.cases
            .iter()
            .any(|c| c.met == Some(false) && c.outcome.is_refutation())
    }
}

/// Two families conjectured to share their full set of bifurcation
/// points over `range`, compared event-by-event to `depth`.
#[derive(Clone, Debug)]
pub struct PermeabilityCase {
    pub name: String,
    pub members: (MapFamily, MapFamily),
    pub kind: EventKind,
    pub depth: u32,
    pub tol: f64,
    pub range: (f64, f64),
    pub opts: CascadeOptions,
}

pub fn permeability_test(case: &PermeabilityCase) -> CaseResult {
    let start = Instant::now();
    let path = ParamPath::along_a();
    let first = member_events(&case.members.0, &path, case);
    let second = member_events(&case.members.1, &path, case);
    let outcome = match (first, second) {
        (Err(r), _) | (_, Err(r)) => Outcome::Inconclusive { reason: r },
        (Ok(a), Ok(b)) => compare_events(a, b, case.tol),
    };
    CaseResult {
        name: case.name.clone(),
        outcome,
        notes: Vec::new(),
        expect: None,
        met: None,
        seed: None,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn member_events(
    family: &MapFamily,
    path: &ParamPath,
    case: &PermeabilityCase,
) -> Result<Vec<f64>, String> {
    match case.kind {
        EventKind::Flip => {
            match bifurcation_sequence(
                family,
                path,
                case.range.0,
                case.range.1,
                case.depth,
                &case.opts,
            ) {
                Ok(seq) => Ok(seq.t_values()),
                Err(CascadeError::CascadeNotFound { .. }) => Ok(Vec::new()),
                Err(e) => Err(e.to_string()),
            }
        }
        EventKind::Tangent => tangent_events(family, path, case.range, case.depth, &case.opts),
    }
}

fn compare_events(first: Vec<f64>, second: Vec<f64>, tol: f64) -> Outcome {
    // "their set may be empty": an empty pair still agrees
    if first.is_empty() && second.is_empty() {
        return Outcome::Confirmed {
            first,
            second,
            max_gap: 0.0,
        };
    }
    if first.len() != second.len() {
        return Outcome::Inconclusive {
            reason: format!(
                "members found {} vs {} events over the searched range",
                first.len(),
                second.len()
            ),
        };
    }
    let mut max_gap = 0.0f64;
    for (n, (x, y)) in first.iter().zip(&second).enumerate() {
        let gap = (x - y).abs();
        let rel = gap / x.abs().max(1.0);
        if rel >= tol {
            return Outcome::Refuted {
                rank: n as u32 + 1,
                gap,
                first,
                second,
            };
        }
        max_gap = max_gap.max(rel);
    }
    Outcome::Confirmed {
        first,
        second,
        max_gap,
    }
}

/// Parameters where the attractor's multiplier meets +1: transversal
/// crossings, cycle births/deaths against a non-periodic region, and
/// tent-shaped touches (branch exchanges) found as multiplier peaks.
fn tangent_events(
    family: &MapFamily,
    path: &ParamPath,
    range: (f64, f64),
    depth: u32,
    opts: &CascadeOptions,
) -> Result<Vec<f64>, String> {
    let (lo, hi) = if range.0 <= range.1 {
        (range.0, range.1)
    } else {
        (range.1, range.0)
    };
    const GRID: u32 = 96;
    let step = (hi - lo) / GRID as f64;
    let probe = |t: f64| -> Option<(u32, f64)> {
        let params = path.point(t);
        let seed = opts.seed.or_else(|| default_seed(family, params))?;
        match classify_attractor(family, params, seed) {
            Attractor::Periodic {
                period, multiplier, ..
            } => Some((period, multiplier)),
            _ => None,
        }
    };
    let states: Vec<Option<(u32, f64)>> = (0..=GRID).map(|i| probe(lo + i as f64 * step)).collect();

    let mut events: Vec<f64> = Vec::new();
    let mut misses: Vec<String> = Vec::new();
    let mut refine = |ta: f64, tb: f64, rank: u32| match find_bifurcation(
        family,
        path,
        rank,
        (ta, tb),
        EventKind::Tangent,
        opts.seed,
    ) {
        Ok(e) => events.push(e.t),
        Err(e) => misses.push(format!("[{ta}, {tb}]: {e}")),
    };

    for i in 0..GRID as usize {
        let (ta, tb) = (lo + i as f64 * step, lo + (i + 1) as f64 * step);
        match (states[i], states[i + 1]) {
            (Some((p1, m1)), Some((p2, m2))) if p1 == p2 => {
                if (m1 - 1.0) * (m2 - 1.0) < 0.0 {
                    refine(ta, tb, i as u32);
                }
            }
            (Some((p1, _)), Some((p2, _))) => {
                let doubled = p2 == 2 * p1 || p1 == 2 * p2;
                if !doubled {
                    // period changed by a non-flip ratio: a cycle was born
                    refine(ta, tb, i as u32);
                }
            }
            (Some(_), None) | (None, Some(_)) => refine(ta, tb, i as u32),
            (None, None) => {}
        }
    }

    // branch exchanges never push the multiplier past 1; they show up as
    // a tent-shaped peak touching it
    for i in 1..GRID as usize {
        let (Some((pa, ma)), Some((pb, mb)), Some((pc, mc))) =
            (states[i - 1], states[i], states[i + 1])
        else {
            continue;
        };
        let _ = (pa, pc);
        if ma < mb && mb >= mc && mb > 0.7 && pb >= 1 {
            if mb >= 1.0 - 1e-9 {
                // the node already sits on the apex
                events.push(lo + i as f64 * step);
            } else if let Some((t, m)) = refine_multiplier_peak(
                &probe,
                lo + (i as f64 - 1.0) * step,
                lo + (i as f64 + 1.0) * step,
            ) {
                if (m - 1.0).abs() <= 1e-5 {
                    events.push(t);
                }
            }
        }
    }

    if !misses.is_empty() {
        return Err(format!("tangent refinement failed at {}", misses.join("; ")));
    }
    events.sort_by(f64::total_cmp);
    events.dedup_by(|b, a| (*b - *a).abs() <= 1e-6 * a.abs().max(1.0));
    events.truncate(depth as usize);
    Ok(events)
}

/// Golden-section maximum of the classified multiplier; the peak may be
/// a kink, which the section search still pins down.
fn refine_multiplier_peak(
    probe: &impl Fn(f64) -> Option<(u32, f64)>,
    mut lo: f64,
    mut hi: f64,
) -> Option<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_895;
    let m_of = |t: f64| probe(t).map(|(_, m)| m);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = m_of(x1)?;
    let mut f2 = m_of(x2)?;
    for _ in 0..120 {
        if hi - lo <= 1e-11 * lo.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = m_of(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = m_of(x1)?;
        }
    }
    let t = 0.5 * (lo + hi);
    Some((t, m_of(t)?))
}

/// Degree of the extremum the cascade pivots on: the highest maximum,
/// or failing that the lowest minimum.
fn dominant_degree(family: &MapFamily, params: ParamPoint) -> Option<(u32, bool)> {
    let (lo, hi) = match family.domain {
        Domain::Interval(lo, hi) => (lo, hi),
        Domain::SemiLine(lo) => (lo, lo + 49.0),
        Domain::Real => (-8.0, 8.0),
    };
    let crits = find_critical_points(family, params, lo, hi);
    let best_max = crits
        .iter()
        .filter(|c| c.kind == CritKind::Maximum)
        .max_by(|a, b| a.value.total_cmp(&b.value));
    let pivot = best_max.or_else(|| {
        crits
            .iter()
            .filter(|c| c.kind == CritKind::Minimum)
            .min_by(|a, b| a.value.total_cmp(&b.value))
    })?;
    Some((pivot.degree, pivot.fractional))
}

/// Reference gap ratio for a cascade pivoting on an extremum of the
/// given flatness; degrees without a frozen constant are measured on
/// the piecewise power family of that degree.
pub fn reference_ratio(degree: u32, precision: Precision) -> Option<f64> {
    match degree {
        2 => Some(QUADRATIC_RATIO),
        4 => Some(QUARTIC_RATIO),
        d => {
            let (_, report) = feigenvalue_for_degree(d as f64, d as f64, 7, precision).ok()?;
            report.deltas.last().copied()
        }
    }
}

pub fn universality_scan(
    name: &str,
    family: &MapFamily,
    path: &ParamPath,
    range: (f64, f64),
    count: u32,
    tol: f64,
    opts: &CascadeOptions,
) -> CaseResult {
    let start = Instant::now();
    let mut notes = Vec::new();
    let base = path.point(range.0);

    let (degree, fractional) = dominant_degree(family, base).unwrap_or((2, false));
    if degree != 2 {
        notes.push(format!("dominant extremum has degree {degree}"));
    }
    if fractional {
        notes.push("dominant extremum has non-integer flatness".into());
    }
    if matches!(family.domain, Domain::Interval(..)) {
        match check_bifurcation_readiness(family, base) {
            Ok(r) => notes.push(format!("readiness: {}", r.verdict.name())),
            Err(e) => notes.push(format!("readiness unavailable: {e}")),
        }
    }

    let outcome = (|| {
        let Some(reference) = reference_ratio(degree, opts.precision) else {
            return Outcome::Inconclusive {
                reason: format!("no reference ratio for degree {degree}"),
            };
        };
        let seq = match bifurcation_sequence(family, path, range.0, range.1, count, opts) {
            Ok(seq) => seq,
            Err(CascadeError::CascadeNotFound { .. }) => return Outcome::NoChaos,
            Err(e) => {
                return Outcome::Inconclusive {
                    reason: e.to_string(),
                }
            }
        };
        if seq.events.len() < 3 {
            return Outcome::Inconclusive {
                reason: format!(
                    "only {} flip(s) found; need 3 for a gap ratio",
                    seq.events.len()
                ),
            };
        }
        let report = match delta_report(&seq.t_values()) {
            Ok(r) => r,
            Err(e) => {
                return Outcome::Inconclusive {
                    reason: e.to_string(),
                }
            }
        };
        let delta = *report.deltas.last().unwrap();
        let rel_err = (delta - reference).abs() / reference;
        let settled = report.deltas.len() >= 2 && {
            let prev = report.deltas[report.deltas.len() - 2];
            (delta - prev).abs() <= 0.25 * delta.abs()
        };
        if rel_err < tol {
            Outcome::Supports {
                delta,
                reference,
                rel_err,
                degree,
            }
        } else if settled {
            Outcome::Refutes {
                delta,
                reference,
                rel_err,
                degree,
            }
        } else {
            Outcome::Inconclusive {
                reason: format!("gap ratios not settled: {:?}", report.deltas),
            }
        }
    })();

    CaseResult {
        name: name.into(),
        outcome,
        notes,
        expect: None,
        met: None,
        seed: None,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn maxima_of(family: &MapFamily, params: ParamPoint) -> Vec<CriticalPoint> {
    let Domain::Interval(lo, hi) = family.domain else {
        return Vec::new();
    };
    find_critical_points(family, params, lo, hi)
        .into_iter()
        .filter(|c| c.kind == CritKind::Maximum)
        .collect()
}

fn attractor_label(a: &Attractor) -> String {
    match a {
        Attractor::Periodic { period, .. } => format!("period-{period}"),
        Attractor::Chaotic { .. } => "chaotic".into(),
        Attractor::Escaped { .. } => "escaped".into(),
        Attractor::Unresolved { .. } => "unresolved".into(),
    }
}

fn support_of(
    family: &MapFamily,
    params: ParamPoint,
    seed: f64,
    attractor: &Attractor,
) -> (f64, f64) {
    match attractor {
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
    }
}

fn same_local(a: &(Attractor, (f64, f64)), b: &(Attractor, (f64, f64))) -> bool {
    match (&a.0, &b.0) {
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
            let mut s1 = o1.clone();
            let mut s2 = o2.clone();
            s1.sort_by(f64::total_cmp);
            s2.sort_by(f64::total_cmp);
            s1.iter()
                .zip(&s2)
                .all(|(x, y)| (x - y).abs() <= 1e-6 * x.abs().max(1.0))
        }
        (Attractor::Chaotic { .. }, Attractor::Chaotic { .. }) => {
            let mid = |s: (f64, f64)| 0.5 * (s.0 + s.1);
            let inside = |m: f64, s: (f64, f64)| m >= s.0 && m <= s.1;
            inside(mid(a.1), b.1) && inside(mid(b.1), a.1)
        }
        (Attractor::Escaped { .. }, Attractor::Escaped { .. }) => true,
        (Attractor::Unresolved { .. }, Attractor::Unresolved { .. }) => true,
        _ => false,
    }
}

fn max_labels(n: usize) -> Vec<String> {
    match n {
        2 => vec!["left".into(), "right".into()],
        _ => (1..=n).map(|k| format!("max{k}")).collect(),
    }
}

/// Track the attractor seeded from each maximum separately across the
/// parameter range; report basin splits, which maximum's cascade runs
/// ahead, and the state-space extent of any local chaos.
pub fn multimax_report(
    name: &str,
    family: &MapFamily,
    path: &ParamPath,
    range: (f64, f64),
    steps: u32,
    depth: u32,
    opts: &CascadeOptions,
) -> CaseResult {
    let start = Instant::now();
    let mut notes = Vec::new();
    let base = path.point(range.0);
    let maxima0 = maxima_of(family, base);
    let outcome = (|| {
        if maxima0.len() < 2 {
            return Outcome::Inconclusive {
                reason: format!("{} interior maxima; need at least 2", maxima0.len()),
            };
        }
        let labels = max_labels(maxima0.len());
        let mut step_rows = Vec::new();
        let mut chaos_cells = Vec::new();
        let mut all_global = true;
        for i in 0..=steps {
            let t = range.0 + (range.1 - range.0) * i as f64 / steps.max(1) as f64;
            let params = path.point(t);
            let mut maxima = maxima_of(family, params);
            if maxima.len() != maxima0.len() {
                notes.push(format!("{} maxima at t = {t}", maxima.len()));
                if maxima.is_empty() {
                    continue;
                }
            }
            maxima.truncate(maxima0.len());
            let locals: Vec<(Attractor, (f64, f64))> = maxima
                .iter()
                .map(|m| {
                    let att = classify_attractor(family, params, m.x);
                    let sup = support_of(family, params, m.x, &att);
                    (att, sup)
                })
                .collect();
            let global = locals.windows(2).all(|w| same_local(&w[0], &w[1]));
            if !global {
                all_global = false;
                let any_periodic = locals
                    .iter()
                    .any(|(a, _)| matches!(a, Attractor::Periodic { .. }));
                for (k, (att, sup)) in locals.iter().enumerate() {
                    if matches!(att, Attractor::Chaotic { .. }) && any_periodic {
                        chaos_cells.push(ChaosCell {
                            t,
                            seed: labels[k.min(labels.len() - 1)].clone(),
                            lo: sup.0,
                            hi: sup.1,
                        });
                    }
                }
            }
            step_rows.push(MultiMaxStep {
                t,
                attractors: locals.iter().map(|(a, _)| attractor_label(a)).collect(),
                global,
            });
        }

        let mut first_flips = Vec::new();
        for m in &maxima0 {
            let o = CascadeOptions {
                seed: Some(m.x),
                ..*opts
            };
            let first = match bifurcation_sequence(family, path, range.0, range.1, depth, &o) {
                Ok(seq) => seq.events.first().map(|e| e.t),
                Err(_) => None,
            };
            first_flips.push(first);
        }
        let faster = {
            let known: Vec<(usize, f64)> = first_flips
                .iter()
                .enumerate()
                .filter_map(|(k, t)| t.map(|t| (k, t)))
                .collect();
            if known.len() == first_flips.len() && !known.is_empty() {
                let (kmin, tmin) = known
                    .iter()
                    .copied()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                let tmax = known.iter().map(|&(_, t)| t).fold(f64::MIN, f64::max);
                if tmax - tmin > 1e-9 * tmax.abs().max(1.0) {
                    Some(labels[kmin].clone())
                } else {
                    None
                }
            } else {
                None
            }
        };
        let delta = if all_global {
            let o = CascadeOptions {
                seed: Some(maxima0[0].x),
                ..*opts
            };
            bifurcation_sequence(family, path, range.0, range.1, depth, &o)
                .ok()
                .and_then(|seq| delta_report(&seq.t_values()).ok())
                .and_then(|r| r.deltas.last().copied())
        } else {
            None
        };
        Outcome::MultiMax(MultiMaxSummary {
            labels,
            steps: step_rows,
            all_global,
            first_flips,
            faster,
            delta,
            chaos_cells,
        })
    })();

    CaseResult {
        name: name.into(),
        outcome,
        notes,
        expect: None,
        met: None,
        seed: None,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Seeded random polynomial endomorphism of [0, 1]: a·q(x) with q ≥ 0,
/// q(0) = q(1) = 0, peak 1, a single interior maximum, degree ≤ 6.
/// Rejection keeps drawing until the constraints hold; the expression
/// string is the ground truth (the family is parsed back from it).
pub fn random_endomorphism(seed: u64) -> (MapFamily, String) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    'draw: loop {
        let deg = rng.gen_range(3..=6usize);
        let mut c = vec![0.0f64; deg];
        for v in c.iter_mut() {
            *v = rng.gen_range(-3.0..3.0);
        }
        let sum: f64 = c.iter().sum();
        c[deg - 1] -= sum;
        if c[deg - 1].abs() > 4.0 {
            continue;
        }
        let mut peak = 0.0f64;
        for i in 1..512 {
            let x = i as f64 / 512.0;
            let mut q = 0.0;
            let mut xp = 1.0;
            for &ck in &c {
                xp *= x;
                q += ck * xp;
            }
            if q <= 0.0 {
                continue 'draw;
            }
            peak = peak.max(q);
        }
        if peak < 1e-2 {
            continue;
        }
        for v in c.iter_mut() {
            *v /= peak;
        }
        let expr = poly_expr(&c);
        let family = parse_family(&expr, Domain::Interval(0.0, 1.0), Orientation::Increasing)
            .expect("generated polynomial must parse");
        let crits = find_critical_points(&family, ParamPoint::new(1.0, 0.0), 0.0, 1.0);
        let n_max = crits.iter().filter(|k| k.kind == CritKind::Maximum).count();
        if n_max != 1 {
            continue;
        }
        return (family, expr);
    }
}

fn poly_expr(c: &[f64]) -> String {
    let mut s = String::from("a*(");
    let mut first = true;
    for (k, &v) in c.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let term = if k == 0 {
            format!("{}*x", v.abs())
        } else {
            format!("{}*x^{}", v.abs(), k + 1)
        };
        if first {
            if v < 0.0 {
                s.push('-');
            }
            first = false;
        } else {
            s.push_str(if v < 0.0 { "-" } else { "+" });
        }
        s.push_str(&term);
    }
    s.push(')');
    s
}

#[derive(Clone, Debug)]
pub enum CaseKind {
    Permeability {
        members: (MapFamily, MapFamily),
        kind: EventKind,
    },
    Universality {
        family: MapFamily,
    },
    MultiMax {
        family: MapFamily,
        steps: u32,
    },
}

#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub name: String,
    pub kind: CaseKind,
    pub range: (f64, f64),
    pub depth: u32,
    pub tol: f64,
    pub expect: Expectation,
    pub rng_seed: Option<u64>,
    pub opts: CascadeOptions,
    /// human-readable reconstruction of the case (expressions, pair)
    pub detail: String,
}

fn expectation_met(outcome: &Outcome, expect: Expectation) -> bool {
    match expect {
        Expectation::Confirm => matches!(
            outcome,
            Outcome::Confirmed { .. } | Outcome::Supports { .. } | Outcome::MultiMax(_)
        ),
        Expectation::Refute => outcome.is_refutation(),
        Expectation::NoChaos => matches!(outcome, Outcome::NoChaos),
    }
}

pub fn run_case(spec: &CaseSpec) -> CaseResult {
    let path = ParamPath::along_a();
    let mut result = match &spec.kind {
        CaseKind::Permeability { members, kind } => permeability_test(&PermeabilityCase {
            name: spec.name.clone(),
            members: members.clone(),
            kind: *kind,
            depth: spec.depth,
            tol: spec.tol,
            range: spec.range,
            opts: spec.opts,
        }),
        CaseKind::Universality { family } => universality_scan(
            &spec.name,
            family,
            &path,
            spec.range,
            spec.depth,
            spec.tol,
            &spec.opts,
        ),
        CaseKind::MultiMax { family, steps } => multimax_report(
            &spec.name,
            family,
            &path,
            spec.range,
            *steps,
            spec.depth,
            &spec.opts,
        ),
    };
    if !spec.detail.is_empty() {
        result.notes.insert(0, spec.detail.clone());
    }
    result.seed = spec.rng_seed;
    result.expect = Some(spec.expect);
    result.met = Some(expectation_met(&result.outcome, spec.expect));
    result
}

/// Cases run concurrently; the report is ordered by case index, so the
/// bytes are identical whatever the worker count.
pub fn run_suite(cases: &[CaseSpec]) -> SuiteReport {
    let mut rows: Vec<(usize, CaseResult)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| (i, run_case(c)))
        .collect();
    rows.sort_by_key(|r| r.0);
    SuiteReport {
        cases: rows.into_iter().map(|r| r.1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use feigen_core::catalog;
    use feigen_core::transform::{transform, TransformKind};

    fn case(
        name: &str,
        members: (MapFamily, MapFamily),
        kind: EventKind,
        depth: u32,
        range: (f64, f64),
    ) -> PermeabilityCase {
        PermeabilityCase {
            name: name.into(),
            members,
            kind,
            depth,
            tol: 1e-8,
            range,
            opts: CascadeOptions::default(),
        }
    }

    #[test]
    fn factor_and_argument_scaling_share_flips() {
        let base = feigen_core::family::parse_base("x-x^3", Domain::Interval(-2.0, 2.0)).unwrap();
        let outer = transform(&base, TransformKind::OuterScale, &Default::default()).unwrap();
        let inner = transform(&base, TransformKind::InnerScale, &Default::default()).unwrap();
        let c = case(
            "cubic-scaling",
            (outer, inner),
            EventKind::Flip,
            3,
            (1.5, 2.5),
        );
        let r = permeability_test(&c);
        match &r.outcome {
            Outcome::Confirmed { first, max_gap, .. } => {
                assert_eq!(first.len(), 3);
                assert!((first[0] - 2.0).abs() < 1e-9, "first flip {}", first[0]);
                assert!(*max_gap < 1e-8, "max gap {max_gap:e}");
            }
            other => panic!("{other:?}"),
        }
        // symmetry: swapped members give the same verdict
        let base2 =
            feigen_core::family::parse_base("x-x^3", Domain::Interval(-2.0, 2.0)).unwrap();
        let outer2 = transform(&base2, TransformKind::OuterScale, &Default::default()).unwrap();
        let inner2 = transform(&base2, TransformKind::InnerScale, &Default::default()).unwrap();
        let swapped = case(
            "cubic-scaling-swapped",
            (inner2, outer2),
            EventKind::Flip,
            3,
            (1.5, 2.5),
        );
        match (permeability_test(&swapped).outcome, r.outcome) {
            (
                Outcome::Confirmed {
                    first: f1,
                    second: s1,
                    ..
                },
                Outcome::Confirmed {
                    first: f2,
                    second: s2,
                    ..
                },
            ) => {
                assert_eq!(f1, s2);
                assert_eq!(s1, f2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn branch_exchange_parameters_match() {
        let members = (
            catalog::family("transcritical_normal").unwrap(),
            catalog::family("transcritical_outer").unwrap(),
        );
        let c = case(
            "transcritical",
            members,
            EventKind::Tangent,
            1,
            (0.3, 1.7),
        );
        match permeability_test(&c).outcome {
            Outcome::Confirmed { first, .. } => {
                assert_eq!(first.len(), 1);
                assert!((first[0] - 1.0).abs() < 1e-7, "exchange at {}", first[0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetric_branch_birth_is_found_even_on_a_grid_node() {
        // the probe grid over (0.3, 1.7) puts a node exactly on the apex
        // at a=1, where the polished multiplier is within 1e-9 of +1
        let members = (
            catalog::family("pitchfork_normal").unwrap(),
            catalog::family("pitchfork_outer").unwrap(),
        );
        let c = case("pitchfork", members, EventKind::Tangent, 1, (0.3, 1.7));
        match permeability_test(&c).outcome {
            Outcome::Confirmed { first, .. } => {
                assert_eq!(first.len(), 1, "no tangent event found");
                assert!((first[0] - 1.0).abs() < 1e-7, "birth at {}", first[0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fold_parameters_match() {
        let members = (
            catalog::family("fold_shift").unwrap(),
            catalog::family("fold_shift_inner").unwrap(),
        );
        let c = case("fold", members, EventKind::Tangent, 1, (-0.6, 0.4));
        match permeability_test(&c).outcome {
            Outcome::Confirmed { first, .. } => {
                assert_eq!(first.len(), 1);
                assert!((first[0] + 0.25).abs() < 1e-7, "fold at {}", first[0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disagreeing_members_are_refuted_at_the_divergent_rank() {
        // logistic flips vs a deliberately reparameterized twin: first
        // events differ, and the rank pins the divergence
        let a = catalog::family("logistic").unwrap();
        let b = feigen_core::family::parse_family(
            "(a+0.1)*x*(1-x)",
            Domain::Interval(0.0, 1.0),
            feigen_core::family::Orientation::Increasing,
        )
        .unwrap();
        let c = case("skewed", (a, b), EventKind::Flip, 2, (2.5, 3.6));
        match permeability_test(&c).outcome {
            Outcome::Refuted { rank, gap, .. } => {
                assert_eq!(rank, 1);
                assert!((gap - 0.1).abs() < 1e-6, "gap {gap}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_event_sets_still_agree() {
        let a = catalog::family("hump_pow").unwrap();
        let b = catalog::family("hump_pow").unwrap();
        let c = case("quiet", (a, b), EventKind::Flip, 3, (0.3, 3.0));
        match permeability_test(&c).outcome {
            Outcome::Confirmed { first, second, .. } => {
                assert!(first.is_empty() && second.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadratic_family_supports_the_universal_ratio() {
        let fam = catalog::family("logistic").unwrap();
        let r = universality_scan(
            "logistic",
            &fam,
            &ParamPath::along_a(),
            (2.5, 3.64),
            6,
            0.02,
            &CascadeOptions::default(),
        );
        match r.outcome {
            Outcome::Supports {
                delta,
                reference,
                rel_err,
                degree,
            } => {
                assert_eq!(degree, 2);
                assert_eq!(reference, QUADRATIC_RATIO);
                assert!(rel_err < 0.01, "delta {delta} rel {rel_err}");
            }
            other => panic!("{other:?}"),
        }
        assert!(r.notes.iter().any(|n| n == "readiness: pass"));
    }

    #[test]
    fn flat_topped_family_never_cascades() {
        let fam = catalog::family("hump_pow").unwrap();
        let r = universality_scan(
            "hump-pow",
            &fam,
            &ParamPath::along_a(),
            (0.3, 3.0),
            4,
            0.02,
            &CascadeOptions::default(),
        );
        assert_eq!(r.outcome, Outcome::NoChaos);
    }

    #[test]
    fn random_endomorphisms_are_reproducible_and_unimodal() {
        let (f1, e1) = random_endomorphism(11);
        let (_f2, e2) = random_endomorphism(11);
        assert_eq!(e1, e2);
        let (_, e3) = random_endomorphism(12);
        assert_ne!(e1, e3);
        let crits = find_critical_points(&f1, ParamPoint::new(1.0, 0.0), 0.0, 1.0);
        assert_eq!(
            crits
                .iter()
                .filter(|c| c.kind == CritKind::Maximum)
                .count(),
            1
        );
        // peak of a·q at a=1 is 1 up to grid coarseness
        let b = ParamPoint::new(1.0, 0.0).bindings();
        let peak = (1..512)
            .map(|i| f1.eval(i as f64 / 512.0, &b).unwrap())
            .fold(f64::MIN, f64::max);
        assert!((peak - 1.0).abs() < 1e-3, "peak {peak}");
    }

    #[test]
    fn suite_order_is_independent_of_scheduling() {
        let specs: Vec<CaseSpec> = [13u64, 17, 19]
            .iter()
            .map(|&s| {
                let (family, expr) = random_endomorphism(s);
                CaseSpec {
                    name: format!("poly-{s}"),
                    kind: CaseKind::Universality { family },
                    range: (0.5, 1.0),
                    depth: 4,
                    tol: 0.05,
                    expect: Expectation::Confirm,
                    rng_seed: Some(s),
                    opts: CascadeOptions::default(),
                    detail: expr,
                }
            })
            .collect();
        let a = run_suite(&specs);
        let b = run_suite(&specs);
        assert_eq!(a.cases.len(), 3);
        for (x, y) in a.cases.iter().zip(&b.cases) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.outcome, y.outcome);
            assert_eq!(x.met, y.met);
        }
    }
}

