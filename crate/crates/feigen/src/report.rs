//! Machine-readable suite reports. The JSON shape is pinned by
//! `schemas/report.schema.json`; the CSV carries the same fields, with
//! lists joined by `;`. Timings are off by default so two runs of the
//! same suite emit identical bytes regardless of worker count.

use std::io::{self, Write};

use serde::Serialize;

use crate::harness::{CaseResult, Outcome, SuiteReport};

pub const REPORT_VERSION: &str = "1";

#[derive(Serialize)]
pub struct ReportDoc {
    pub version: &'static str,
    pub cases: Vec<ReportCase>,
}

#[derive(Serialize)]
pub struct ReportCase {
    pub name: String,
    pub verdict: &'static str,
    pub expect: Option<&'static str>,
    pub met: Option<bool>,
    pub rank: Option<u32>,
    pub gap: Option<f64>,
    pub max_gap: Option<f64>,
    pub first_events: Vec<f64>,
    pub second_events: Vec<f64>,
    pub delta: Option<f64>,
    pub reference: Option<f64>,
    pub rel_err: Option<f64>,
    pub degree: Option<u32>,
    pub all_global: Option<bool>,
    pub faster: Option<String>,
    pub first_flips: Vec<Option<f64>>,
    pub chaos_cells: Vec<ChaosCellRow>,
    pub reason: Option<String>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
    pub seconds: Option<f64>,
}

#[derive(Serialize)]
pub struct ChaosCellRow {
    pub t: f64,
    pub seed: String,
    pub lo: f64,
    pub hi: f64,
}

pub fn report_doc(report: &SuiteReport, timings: bool) -> ReportDoc {
    ReportDoc {
        version: REPORT_VERSION,
        cases: report
            .cases
            .iter()
            .map(|c| report_case(c, timings))
            .collect(),
    }
}

fn report_case(c: &CaseResult, timings: bool) -> ReportCase {
    let mut row = ReportCase {
        name: c.name.clone(),
        verdict: c.outcome.verdict(),
        expect: c.expect.map(|e| e.name()),
        met: c.met,
        rank: None,
        gap: None,
        max_gap: None,
        first_events: Vec::new(),
        second_events: Vec::new(),
        delta: None,
        reference: None,
        rel_err: None,
        degree: None,
        all_global: None,
        faster: None,
        first_flips: Vec::new(),
        chaos_cells: Vec::new(),
        reason: None,
        notes: c.notes.clone(),
        seed: c.seed,
        seconds: timings.then_some(c.seconds),
    };
    match &c.outcome {
        Outcome::Confirmed {
            first,
            second,
            max_gap,
        } => {
            row.first_events = first.clone();
            row.second_events = second.clone();
            row.max_gap = Some(*max_gap);
        }
        Outcome::Refuted {
            rank,
            gap,
            first,
            second,
        } => {
            row.rank = Some(*rank);
            row.gap = Some(*gap);
            row.first_events = first.clone();
            row.second_events = second.clone();
        }
        Outcome::Supports {
            delta,
            reference,
            rel_err,
            degree,
        }
        | Outcome::Refutes {
            delta,
            reference,
            rel_err,
            degree,
        } => {
            row.delta = Some(*delta);
            row.reference = Some(*reference);
            row.rel_err = Some(*rel_err);
            row.degree = Some(*degree);
        }
        Outcome::NoChaos => {}
        Outcome::MultiMax(m) => {
            row.all_global = Some(m.all_global);
            row.faster = m.faster.clone();
            row.first_flips = m.first_flips.clone();
            row.delta = m.delta;
            row.chaos_cells = m
                .chaos_cells
                .iter()
                .map(|c| ChaosCellRow {
                    t: c.t,
                    seed: c.seed.clone(),
                    lo: c.lo,
                    hi: c.hi,
                })
                .collect();
        }
        Outcome::Inconclusive { reason } => row.reason = Some(reason.clone()),
    }
    row
}

pub fn write_suite_json<W: Write>(
    mut w: W,
    report: &SuiteReport,
    timings: bool,
) -> io::Result<()> {
    let doc = report_doc(report, timings);
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}

fn join_floats(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_suite_csv<W: Write>(w: W, report: &SuiteReport, timings: bool) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "name",
        "verdict",
        "expect",
        "met",
        "rank",
        "gap",
        "max_gap",
        "first_events",
        "second_events",
        "delta",
        "reference",
        "rel_err",
        "degree",
        "all_global",
        "faster",
        "first_flips",
        "chaos_cells",
        "reason",
        "notes",
        "seed",
        "seconds",
    ])?;
    for c in &report_doc(report, timings).cases {
        let cells = c
            .chaos_cells
            .iter()
            .map(|c| format!("{}@{}:{}..{}", c.seed, c.t, c.lo, c.hi))
            .collect::<Vec<_>>()
            .join(";");
        out.write_record([
            c.name.clone(),
            c.verdict.to_string(),
            c.expect.unwrap_or_default().to_string(),
            opt(&c.met),
            opt(&c.rank),
            opt(&c.gap),
            opt(&c.max_gap),
            join_floats(&c.first_events),
            join_floats(&c.second_events),
            opt(&c.delta),
            opt(&c.reference),
            opt(&c.rel_err),
            opt(&c.degree),
            opt(&c.all_global),
            opt(&c.faster),
            c.first_flips
                .iter()
                .map(|t| t.map(|v| v.to_string()).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(";"),
            cells,
            opt(&c.reason),
            c.notes.join(";"),
            opt(&c.seed),
            opt(&c.seconds),
        ])?;
    }
    out.flush()
}

/// Minimal JSON-Schema checker covering the subset the shipped schema
/// uses: type (single or list), properties/required/additionalProperties,
/// items, and enum.
pub fn validate_against_schema(
    schema: &serde_json::Value,
    instance: &serde_json::Value,
    at: &str,
) -> Result<(), String> {
    use serde_json::Value;
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(instance) {
            return Err(format!("{at}: {instance} not in enum"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let actual = match instance {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) => {
                if n.is_u64() || n.is_i64() {
                    "integer"
                } else {
                    "number"
                }
            }
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        // every integer is a number
        let ok = names
            .iter()
            .any(|n| *n == actual || (*n == "number" && actual == "integer"));
        if !ok {
            return Err(format!("{at}: expected type {names:?}, got {actual}"));
        }
    }
    if let Some(obj) = instance.as_object() {
        if let Some(required) = schema.get("required").and_then(|v| v.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !obj.contains_key(key) {
                    return Err(format!("{at}: missing required field {key:?}"));
                }
            }
        }
        let props = schema.get("properties").and_then(|v| v.as_object());
        if let Some(props) = props {
            for (key, value) in obj {
                match props.get(key) {
                    Some(sub) => {
                        validate_against_schema(sub, value, &format!("{at}.{key}"))?
                    }
                    None => {
                        if schema.get("additionalProperties")
                            == Some(&serde_json::Value::Bool(false))
                        {
                            return Err(format!("{at}: unexpected field {key:?}"));
                        }
                    }
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), instance.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate_against_schema(items, v, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{ChaosCell, Expectation, MultiMaxStep, MultiMaxSummary};

    fn sample_report() -> SuiteReport {
        SuiteReport {
            cases: vec![
                CaseResult {
                    name: "pair".into(),
                    outcome: Outcome::Confirmed {
                        first: vec![3.0, 3.449489742783178],
                        second: vec![3.0, 3.449489742783178],
                        max_gap: 0.0,
                    },
                    notes: vec!["outer_scale vs inner_scale of x*(1-x)".into()],
                    expect: Some(Expectation::Confirm),
                    met: Some(true),
                    seed: None,
                    seconds: 0.25,
                },
                CaseResult {
                    name: "ratio".into(),
                    outcome: Outcome::Refutes {
                        delta: 1.6714,
                        reference: 4.669201609102990,
                        rel_err: 0.642,
                        degree: 2,
                    },
                    notes: vec![],
                    expect: Some(Expectation::Refute),
                    met: Some(true),
                    seed: Some(7),
                    seconds: 1.5,
                },
                CaseResult {
                    name: "many".into(),
                    outcome: Outcome::MultiMax(MultiMaxSummary {
                        labels: vec!["left".into(), "right".into()],
                        steps: vec![MultiMaxStep {
                            t: 3.0,
                            attractors: vec!["period-2".into(), "chaotic".into()],
                            global: false,
                        }],
                        all_global: false,
                        first_flips: vec![Some(3.1), Some(3.0)],
                        faster: Some("right".into()),
                        delta: None,
                        chaos_cells: vec![ChaosCell {
                            t: 3.0,
                            seed: "right".into(),
                            lo: 0.87,
                            hi: 0.945,
                        }],
                    }),
                    notes: vec![],
                    expect: Some(Expectation::Confirm),
                    met: Some(true),
                    seed: None,
                    seconds: 2.0,
                },
            ],
        }
    }

    #[test]
    fn json_is_deterministic_and_omits_timing_by_default() {
        let report = sample_report();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_suite_json(&mut a, &report, false).unwrap();
        write_suite_json(&mut b, &report, false).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"seconds\": null"));
        let mut timed = Vec::new();
        write_suite_json(&mut timed, &report, true).unwrap();
        assert!(String::from_utf8(timed).unwrap().contains("\"seconds\": 0.25"));
    }

    #[test]
    fn csv_round_trips_event_values_exactly() {
        let report = sample_report();
        let mut buf = Vec::new();
        write_suite_csv(&mut buf, &report, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let field = line.split(',').nth(7).unwrap();
        let parsed: Vec<f64> = field.split(';').map(|s| s.parse().unwrap()).collect();
        assert_eq!(parsed, vec![3.0, 3.449489742783178]);
        // every line has the full column set
        let cols = text.lines().next().unwrap().split(',').count();
        for l in text.lines() {
            assert_eq!(l.split(',').count(), cols, "{l}");
        }
    }

    #[test]
    fn generated_reports_validate_against_the_shipped_schema() {
        let schema: serde_json::Value =
            serde_json::from_str(include_str!("../../../schemas/report.schema.json")).unwrap();
        let report = sample_report();
        for timings in [false, true] {
            let doc = report_doc(&report, timings);
            let value = serde_json::to_value(&doc).unwrap();
            validate_against_schema(&schema, &value, "$").unwrap();
        }
        // and the validator does reject a wrong shape
        let bad = serde_json::json!({"version": "1", "cases": [{"name": 3}]});
        assert!(validate_against_schema(&schema, &bad, "$").is_err());
    }
}
