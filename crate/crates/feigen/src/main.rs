//! Command-line front end. Every subcommand wraps one library entry
//! point and emits CSV or JSON; exit codes are scriptable:
//! 0 ok, 2 config, 3 evaluation fault, 4 no cascade, 5 unexpected
//! refutation.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use feigen::diagram::{diagram, DiagramOptions};
use feigen::harness::run_suite;
use feigen::report::{write_suite_csv, write_suite_json};
use feigen::suite::parse_suite;
use feigen_core::bifurcation::{
    bifurcation_sequence, delta_report, directional_bifurcations, feigenvalue_for_degree,
    superstable_sequence, tine_ratio_table, tine_widths, BifurcationSequence, CascadeError,
    CascadeOptions, DeltaReport, EventKind, ParamPath, Precision,
};
use feigen_core::catalog::{self, CatalogEntry, TineOrder};
use feigen_core::dynamics::{classify_attractor, default_seed, scan_local_attractors, Attractor};
use feigen_core::family::{parse_base, Domain, MapFamily, Orientation, ParamPoint};
use feigen_core::schwarzian::{check_bifurcation_readiness, schwarzian_at, sign_profile};

#[derive(Parser)]
#[command(name = "feigen", version, about = "Period-doubling laboratory for 1-D map families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker threads for suite runs (also FEIGEN_WORKERS)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// include wall-clock seconds in suite reports
    #[arg(long, global = true)]
    timings: bool,
    /// arithmetic backend for bifurcation refinement
    #[arg(long, global = true, value_enum, default_value_t = Prec::Double)]
    precision: Prec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prec {
    Double,
    Dd,
}

impl Prec {
    fn to_core(self) -> Precision {
        match self {
            Prec::Double => Precision::Double,
            Prec::Dd => Precision::DoubleDouble,
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// built-in family name
    #[arg(long)]
    catalog: Option<String>,
    /// inline expression in the map DSL, e.g. "a*x*(1-x)"
    #[arg(long)]
    expr: Option<String>,
    /// file containing one expression
    #[arg(long)]
    file: Option<PathBuf>,
    /// domain for --expr/--file: lo:hi | semiline:lo | real
    #[arg(long)]
    domain: Option<String>,
    /// cascade direction for --expr/--file: inc | dec
    #[arg(long)]
    orient: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Long-run attractor at a parameter point (or a seed scan on ℝ)
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        /// parameter point, e.g. a=3.2 or a=1.05,b=0.5
        #[arg(long)]
        params: String,
        /// starting point override
        #[arg(long)]
        seed: Option<f64>,
        /// classify from seeds across lo:hi:step instead of one orbit
        #[arg(long)]
        scan: Option<String>,
    },
    /// Flip cascade along a parameter path with ratio diagnostics
    Cascade {
        #[command(flatten)]
        family: FamilyArgs,
        /// number of doublings to locate
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// path start (defaults to the catalog hint)
        #[arg(long)]
        t0: Option<f64>,
        /// path bound (defaults to the catalog hint)
        #[arg(long)]
        tmax: Option<f64>,
        /// hold b fixed at this value while a varies
        #[arg(long)]
        b: Option<f64>,
        /// path base "a,b" (with --dir)
        #[arg(long)]
        base: Option<String>,
        /// path direction "da,db" (with --base)
        #[arg(long)]
        dir: Option<String>,
        /// orbit seed override
        #[arg(long)]
        seed: Option<f64>,
        /// initial march step
        #[arg(long)]
        step: Option<f64>,
        /// march-step budget
        #[arg(long)]
        budget: Option<u32>,
        /// -1 marches downward from t0
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<i32>,
        /// flatness override "n" or "n_left,n_right" for the split family
        #[arg(long)]
        degree: Option<String>,
    },
    /// Post-transient attractor samples across a parameter sweep
    Diagram {
        #[command(flatten)]
        family: FamilyArgs,
        /// parameter range lo:hi
        #[arg(long)]
        sweep: String,
        /// number of parameter values
        #[arg(long, default_value_t = 400)]
        grid: u32,
        /// samples kept per parameter value
        #[arg(long, default_value_t = 200)]
        samples: u32,
        /// iterations discarded per parameter value
        #[arg(long, default_value_t = 2000)]
        transient: u64,
        /// hold b fixed at this value
        #[arg(long)]
        b: Option<f64>,
        /// starting point override
        #[arg(long)]
        seed: Option<f64>,
    },
    /// Schwarzian derivative at a point or its sign profile on an interval
    Schwarzian {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        params: String,
        /// evaluate at this single point
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
        /// profile interval lo:hi (defaults to the family domain)
        #[arg(long)]
        interval: Option<String>,
        /// sample count for the sign profile
        #[arg(long, default_value_t = 512)]
        grid: u32,
    },
    /// Sufficient-condition checks for a clean doubling route
    Readiness {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        params: String,
    },
    /// Fork widths of the 2^(level-1) orbit at a superstable parameter
    Widths {
        #[command(flatten)]
        family: FamilyArgs,
        /// cascade level (orbit has 2^(level-1) points)
        #[arg(long)]
        level: u32,
        /// parameter point; derived from the superstable sequence when omitted
        #[arg(long)]
        params: Option<String>,
        /// also compute level+1 and emit the cross-level width ratios
        #[arg(long)]
        ratio: bool,
        /// orbit seed override
        #[arg(long)]
        seed: Option<f64>,
        /// rank ordering: asc | desc (defaults to the catalog hint)
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Gap ratio of the split family 1 - a|x|^n (flatness-dependent limit)
    Feigenvalue {
        /// flatness at the extremum
        #[arg(long)]
        degree: f64,
        /// right-side flatness when asymmetric
        #[arg(long)]
        degree_right: Option<f64>,
        /// number of doublings
        #[arg(long, default_value_t = 7)]
        count: u32,
    },
    /// Cascade along an arbitrary straight line in the (a, b) plane
    Directional {
        #[command(flatten)]
        family: FamilyArgs,
        /// base point "a,b"
        #[arg(long)]
        base: String,
        /// direction "da,db"
        #[arg(long)]
        dir: String,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long)]
        seed: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Run a suite file of conjecture cases
    Suite {
        /// line-oriented case file
        file: PathBuf,
    },
}

enum Fail {
    Config(String),
    Eval(String),
    NoCascade(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Config(_) => 2,
            Fail::Eval(_) => 3,
            Fail::NoCascade(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Fail::Config(m) | Fail::Eval(m) | Fail::NoCascade(m) => m,
        }
    }
}

fn config<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Config(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("feigen: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Fail> {
    let mut sink = open_sink(&cli.out)?;
    match &cli.command {
        Command::Classify {
            family,
            params,
            seed,
            scan,
        } => {
            let (fam, _) = build_family(family)?;
            let point = parse_params(params)?;
            match scan {
                Some(spec) => {
                    let (lo, hi, step) = parse_triple(spec)?;
                    if !(hi > lo) || !(step > 0.0) {
                        return config("scan needs lo < hi and step > 0");
                    }
                    let cells = ((hi - lo) / step).round().max(1.0) as u32;
                    let report = scan_local_attractors(&fam, point, lo, hi, cells);
                    emit_scan(&mut sink, cli.format, &report)
                }
                None => {
                    let x0 = seed.or_else(|| default_seed(&fam, point)).ok_or_else(|| {
                        Fail::Eval("no interior extremum; pass --seed".into())
                    })?;
                    let att = classify_attractor(&fam, point, x0);
                    emit_attractor(&mut sink, cli.format, &att)
                }
            }
            .map_err(io_fail)?;
            Ok(0)
        }
        Command::Cascade {
            family,
            depth,
            t0,
            tmax,
            b,
            base,
            dir,
            seed,
            step,
            budget,
            direction,
            degree,
        } => {
            if *depth < 1 {
                return config("depth must be ≥ 1");
            }
            if let Some(spec) = degree {
                let (nl, nr) = parse_degrees(spec)?;
                let (seq, rep) = feigenvalue_for_degree(nl, nr, *depth, cli.precision.to_core())
                    .map_err(cascade_fail)?;
                emit_cascade(&mut sink, cli.format, &seq, &rep).map_err(io_fail)?;
                return Ok(0);
            }
            let (fam, entry) = build_family(family)?;
            let path = parse_path(base, dir, *b)?;
            let hints = entry.map(|e| e.hints);
            let (mut start, mut stop) = match (t0, tmax, hints) {
                (Some(s), Some(e), _) => (*s, *e),
                (None, None, Some(h)) => (h.t0, h.t_end),
                (Some(s), None, Some(h)) => (*s, h.t_end),
                (None, Some(e), Some(h)) => (h.t0, *e),
                _ => return config("pass --t0 and --tmax (no catalog hints available)"),
            };
            match direction {
                Some(-1) if start < stop => core::mem::swap(&mut start, &mut stop),
                Some(1) if start > stop => core::mem::swap(&mut start, &mut stop),
                None | Some(-1) | Some(1) => {}
                Some(_) => return config("--direction takes 1 or -1"),
            }
            let opts = CascadeOptions {
                seed: seed.or(hints.and_then(|h| h.seed)),
                first_step: step.or(hints.map(|h| h.first_step)),
                precision: cli.precision.to_core(),
                march_budget: budget.unwrap_or(CascadeOptions::default().march_budget),
            };
            let seq = bifurcation_sequence(&fam, &path, start, stop, *depth, &opts)
                .map_err(cascade_fail)?;
            let rep = delta_report(&seq.t_values()).map_err(cascade_fail)?;
            emit_cascade(&mut sink, cli.format, &seq, &rep).map_err(io_fail)?;
            Ok(0)
        }
        Command::Diagram {
            family,
            sweep,
            grid,
            samples,
            transient,
            b,
            seed,
        } => {
            let (fam, _) = build_family(family)?;
            let range = parse_range(sweep)?;
            let path = match b {
                Some(v) => ParamPath::along_a_at(*v),
                None => ParamPath::along_a(),
            };
            let opts = DiagramOptions {
                transient: *transient,
                samples: *samples,
                seed: *seed,
            };
            let rows = diagram(&fam, &path, range, *grid, &opts);
            emit_diagram(&mut sink, cli.format, &rows, *samples).map_err(io_fail)?;
            Ok(0)
        }
        Command::Schwarzian {
            family,
            params,
            at,
            interval,
            grid,
        } => {
            let (fam, _) = build_family(family)?;
            let point = parse_params(params)?;
            if let Some(x) = at {
                let s = schwarzian_at(&fam, point, *x)
                    .map_err(|e| Fail::Eval(e.to_string()))?;
                emit_point_value(&mut sink, cli.format, *x, s).map_err(io_fail)?;
                return Ok(0);
            }
            let iv = match interval {
                Some(spec) => parse_range(spec)?,
                None => match fam.domain {
                    Domain::Interval(lo, hi) => (lo, hi),
                    _ => return config("unbounded domain: pass --interval lo:hi"),
                },
            };
            let profile = sign_profile(&fam, point, iv, *grid)
                .map_err(|e| Fail::Eval(e.to_string()))?;
            emit_profile(&mut sink, cli.format, &profile).map_err(io_fail)?;
            Ok(0)
        }
        Command::Readiness { family, params } => {
            let (fam, _) = build_family(family)?;
            let point = parse_params(params)?;
            let report = check_bifurcation_readiness(&fam, point)
                .map_err(|e| Fail::Eval(e.to_string()))?;
            emit_readiness(&mut sink, cli.format, &report).map_err(io_fail)?;
            Ok(0)
        }
        Command::Widths {
            family,
            level,
            params,
            ratio,
            seed,
            order,
            t0,
            tmax,
        } => {
            if *level < 2 {
                return config("level must be ≥ 2");
            }
            let (fam, entry) = build_family(family)?;
            let ord = match order.as_deref() {
                Some("asc") => TineOrder::Ascending,
                Some("desc") => TineOrder::Descending,
                Some(other) => return config(format!("unknown order '{other}'")),
                None => entry.map(|e| e.hints.tine_order).unwrap_or(TineOrder::Ascending),
            };
            let derive_levels = if *ratio { *level } else { *level - 1 };
            let supers = match params {
                Some(_) if *ratio => {
                    return config("--ratio derives both parameters; drop --params")
                }
                Some(p) => vec![parse_params(p)?.a],
                None => {
                    let hints = entry.map(|e| e.hints);
                    let (start, stop) = match (t0, tmax, hints) {
                        (Some(s), Some(e), _) => (*s, *e),
                        (None, None, Some(h)) => (h.t0, h.t_end),
                        (Some(s), None, Some(h)) => (*s, h.t_end),
                        (None, Some(e), Some(h)) => (h.t0, *e),
                        _ => return config("pass --params or --t0/--tmax"),
                    };
                    let opts = CascadeOptions {
                        seed: seed.or(hints.and_then(|h| h.seed)),
                        first_step: hints.map(|h| h.first_step),
                        precision: cli.precision.to_core(),
                        ..CascadeOptions::default()
                    };
                    let seq =
                        superstable_sequence(&fam, &ParamPath::along_a(), start, stop, derive_levels, &opts)
                            .map_err(cascade_fail)?;
                    seq.params
                }
            };
            let param_at = |n: u32| -> Result<ParamPoint, Fail> {
                supers
                    .get(n as usize)
                    .map(|&a| ParamPoint::new(a, 0.0))
                    .ok_or_else(|| Fail::Eval(format!("no superstable parameter at level {n}")))
            };
            let single = match params {
                Some(p) => parse_params(p)?,
                None => param_at(*level - 1)?,
            };
            let seed_at = |p: ParamPoint| -> Result<f64, Fail> {
                seed.or_else(|| default_seed(&fam, p))
                    .ok_or_else(|| Fail::Eval("no interior extremum; pass --seed".into()))
            };
            let coarse = tine_widths(&fam, single, *level, seed_at(single)?, ord)
                .map_err(cascade_fail)?;
            if *ratio {
                let fine_point = param_at(*level)?;
                let fine = tine_widths(&fam, fine_point, *level + 1, seed_at(fine_point)?, ord)
                    .map_err(cascade_fail)?;
                let table = tine_ratio_table(&coarse, &fine);
                emit_ratio_table(&mut sink, cli.format, single.a, fine_point.a, *level, &table)
                    .map_err(io_fail)?;
            } else {
                emit_widths(&mut sink, cli.format, single.a, &coarse).map_err(io_fail)?;
            }
            Ok(0)
        }
        Command::Feigenvalue {
            degree,
            degree_right,
            count,
        } => {
            let (seq, rep) =
                feigenvalue_for_degree(*degree, degree_right.unwrap_or(*degree), *count, cli.precision.to_core())
                    .map_err(cascade_fail)?;
            emit_cascade(&mut sink, cli.format, &seq, &rep).map_err(io_fail)?;
            Ok(0)
        }
        Command::Directional {
            family,
            base,
            dir,
            t0,
            tmax,
            depth,
            seed,
            step,
        } => {
            let (fam, entry) = build_family(family)?;
            let (ba, bb) = parse_pair(base)?;
            let (da, db) = parse_pair(dir)?;
            let opts = CascadeOptions {
                seed: seed.or(entry.and_then(|e| e.hints.seed)),
                first_step: *step,
                precision: cli.precision.to_core(),
                ..CascadeOptions::default()
            };
            let (seq, rep) = directional_bifurcations(
                &fam,
                ParamPoint::new(ba, bb),
                (da, db),
                *t0,
                *tmax,
                *depth,
                &opts,
            )
            .map_err(cascade_fail)?;
            emit_cascade(&mut sink, cli.format, &seq, &rep).map_err(io_fail)?;
            Ok(0)
        }
        Command::Suite { file } => {
            let text = fs::read_to_string(file)
                .map_err(|e| Fail::Config(format!("{}: {e}", file.display())))?;
            let cases = parse_suite(&text).map_err(|e| Fail::Config(e.to_string()))?;
            let workers = cli.workers.or_else(|| {
                std::env::var("FEIGEN_WORKERS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let report = match workers {
                Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Fail::Config(e.to_string()))?
                    .install(|| run_suite(&cases)),
                _ => run_suite(&cases),
            };
            for case in &report.cases {
                let met = match case.met {
                    Some(true) => "met",
                    Some(false) => "UNMET",
                    None => "-",
                };
                eprintln!("{}: {} [{met}]", case.name, case.outcome.verdict());
            }
            match cli.format {
                Format::Json => write_suite_json(&mut sink, &report, cli.timings),
                Format::Csv => write_suite_csv(&mut sink, &report, cli.timings),
            }
            .map_err(io_fail)?;
            sink.flush().map_err(io_fail)?;
            if report.unexpected_refutation() {
                eprintln!("feigen: a case refuted its expectation");
                return Ok(5);
            }
            if !report.all_met() {
                return Err(Fail::Eval("a case missed its expectation".into()));
            }
            Ok(0)
        }
    }
}

fn io_fail(e: io::Error) -> Fail {
    Fail::Eval(format!("write failed: {e}"))
}

fn cascade_fail(e: CascadeError) -> Fail {
    match e {
        CascadeError::CascadeNotFound { .. } => Fail::NoCascade(e.to_string()),
        other => Fail::Eval(other.to_string()),
    }
}

fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Fail> {
    match out {
        Some(path) => {
            let f = fs::File::create(path)
                .map_err(|e| Fail::Config(format!("{}: {e}", path.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn build_family(args: &FamilyArgs) -> Result<(MapFamily, Option<&'static CatalogEntry>), Fail> {
    let sources =
        args.catalog.is_some() as u32 + args.expr.is_some() as u32 + args.file.is_some() as u32;
    if sources != 1 {
        return config("pass exactly one of --catalog, --expr, --file");
    }
    if let Some(name) = &args.catalog {
        if args.domain.is_some() || args.orient.is_some() {
            return config("catalog families fix their own domain and orientation");
        }
        let entry = catalog::find(name).ok_or_else(|| {
            Fail::Config(format!(
                "unknown family '{name}'; known: {}",
                catalog::names().join(", ")
            ))
        })?;
        return Ok((entry.family(), Some(entry)));
    }
    let src = match (&args.expr, &args.file) {
        (Some(e), _) => e.clone(),
        (_, Some(p)) => fs::read_to_string(p)
            .map_err(|e| Fail::Config(format!("{}: {e}", p.display())))?
            .trim()
            .to_string(),
        _ => unreachable!(),
    };
    let domain = match args.domain.as_deref() {
        None => Domain::Interval(0.0, 1.0),
        Some("real") => Domain::Real,
        Some(s) => match s.strip_prefix("semiline:") {
            Some(lo) => Domain::SemiLine(
                lo.parse()
                    .map_err(|_| Fail::Config(format!("bad domain bound '{lo}'")))?,
            ),
            None => {
                let (lo, hi) = parse_range(s)?;
                if !(hi > lo) {
                    return config("domain needs lo < hi");
                }
                Domain::Interval(lo, hi)
            }
        },
    };
    let mut fam =
        parse_base(&src, domain).map_err(|e| Fail::Config(format!("bad expression: {e}")))?;
    fam.orientation = match args.orient.as_deref() {
        None | Some("inc") => Orientation::Increasing,
        Some("dec") => Orientation::Decreasing,
        Some(other) => return config(format!("unknown orientation '{other}'")),
    };
    Ok((fam, None))
}

fn parse_params(s: &str) -> Result<ParamPoint, Fail> {
    let mut a = 0.0;
    let mut b = 0.0;
    for part in s.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Fail::Config(format!("params need key=value, got '{part}'")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Fail::Config(format!("bad number '{value}'")))?;
        match key.trim() {
            "a" => a = v,
            "b" => b = v,
            other => return config(format!("unknown parameter '{other}'")),
        }
    }
    Ok(ParamPoint::new(a, b))
}

fn parse_f64(s: &str) -> Result<f64, Fail> {
    s.trim()
        .parse()
        .map_err(|_| Fail::Config(format!("bad number '{s}'")))
}

fn parse_range(s: &str) -> Result<(f64, f64), Fail> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Fail::Config(format!("expected lo:hi, got '{s}'")))?;
    Ok((parse_f64(lo)?, parse_f64(hi)?))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), Fail> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return config(format!("expected lo:hi:step, got '{s}'"));
    }
    Ok((parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?))
}

fn parse_pair(s: &str) -> Result<(f64, f64), Fail> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Fail::Config(format!("expected x,y, got '{s}'")))?;
    Ok((parse_f64(x)?, parse_f64(y)?))
}

fn parse_degrees(s: &str) -> Result<(f64, f64), Fail> {
    match s.split_once(',') {
        Some((l, r)) => Ok((parse_f64(l)?, parse_f64(r)?)),
        None => {
            let n = parse_f64(s)?;
            Ok((n, n))
        }
    }
}

fn parse_path(base: &Option<String>, dir: &Option<String>, b: Option<f64>) -> Result<ParamPath, Fail> {
    match (base, dir) {
        (Some(bs), Some(ds)) => {
            let (ba, bb) = parse_pair(bs)?;
            let (da, db) = parse_pair(ds)?;
            if da == 0.0 && db == 0.0 {
                return config("zero path direction");
            }
            Ok(ParamPath::new(ParamPoint::new(ba, bb), (da, db)))
        }
        (None, None) => Ok(match b {
            Some(v) => ParamPath::along_a_at(v),
            None => ParamPath::along_a(),
        }),
        _ => config("--base and --dir go together"),
    }
}

fn kind_name(kind: EventKind) -> &'static str {
    match kind {
        EventKind::Flip => "flip",
        EventKind::Tangent => "tangent",
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(w)
}

fn write_json(w: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    w.flush()
}

fn emit_attractor(w: &mut dyn Write, format: Format, att: &Attractor) -> io::Result<()> {
    match format {
        Format::Json => {
            let value = match att {
                Attractor::Periodic {
                    period,
                    orbit,
                    multiplier,
                } => json!({
                    "kind": "periodic", "period": period, "multiplier": multiplier,
                    "orbit": orbit,
                }),
                Attractor::Chaotic { lyapunov } => json!({
                    "kind": "chaotic", "lyapunov": lyapunov,
                }),
                Attractor::Escaped { step, last_x } => json!({
                    "kind": "escaped", "step": step, "last_x": last_x,
                }),
                Attractor::Unresolved { reason } => json!({
                    "kind": "unresolved", "reason": reason,
                }),
            };
            write_json(w, &value)
        }
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record([
                "kind",
                "period",
                "multiplier",
                "lyapunov",
                "escape_step",
                "last_x",
                "reason",
                "orbit",
            ])?;
            let empty = String::new;
            let row = match att {
                Attractor::Periodic {
                    period,
                    orbit,
                    multiplier,
                } => vec![
                    "periodic".into(),
                    period.to_string(),
                    multiplier.to_string(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    orbit.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
                ],
                Attractor::Chaotic { lyapunov } => vec![
                    "chaotic".into(),
                    empty(),
                    empty(),
                    lyapunov.to_string(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                ],
                Attractor::Escaped { step, last_x } => vec![
                    "escaped".into(),
                    empty(),
                    empty(),
                    empty(),
                    step.to_string(),
                    last_x.to_string(),
                    empty(),
                    empty(),
                ],
                Attractor::Unresolved { reason } => vec![
                    "unresolved".into(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    empty(),
                    reason.clone(),
                    empty(),
                ],
            };
            wtr.write_record(&row)?;
            wtr.flush()
        }
    }
}

fn emit_scan(
    w: &mut dyn Write,
    format: Format,
    report: &feigen_core::dynamics::LocalScanReport,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let attractors: Vec<_> = report
                .attractors
                .iter()
                .map(|d| {
                    json!({
                        "kind": d.attractor.kind_name(),
                        "period": d.attractor.period(),
                        "support": [d.support.0, d.support.1],
                    })
                })
                .collect();
            let cells: Vec<_> = report
                .cells
                .iter()
                .map(|c| json!({"lo": c.lo, "hi": c.hi, "attractor": c.index}))
                .collect();
            write_json(w, &json!({"attractors": attractors, "cells": cells}))
        }
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record(["cell_lo", "cell_hi", "attractor", "kind", "period"])?;
            for c in &report.cells {
                let d = &report.attractors[c.index];
                wtr.write_record([
                    c.lo.to_string(),
                    c.hi.to_string(),
                    c.index.to_string(),
                    d.attractor.kind_name().to_string(),
                    d.attractor.period().map(|p| p.to_string()).unwrap_or_default(),
                ])?;
            }
            wtr.flush()
        }
    }
}

fn emit_cascade(
    w: &mut dyn Write,
    format: Format,
    seq: &BifurcationSequence,
    rep: &DeltaReport,
) -> io::Result<()> {
    let first = seq.events.first().map(|e| e.t);
    let ratio = match (first, rep.b_inf) {
        (Some(b1), Some(bi)) if b1 != 0.0 => Some(bi / b1),
        _ => None,
    };
    match format {
        Format::Json => {
            let events: Vec<_> = seq
                .events
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    json!({
                        "rank": i + 1,
                        "t": e.t,
                        "a": e.params.a,
                        "b": e.params.b,
                        "kind": kind_name(e.kind),
                        "period_before": e.period_before,
                        "residual": e.residual,
                        "bracket_width": e.bracket_width,
                    })
                })
                .collect();
            write_json(
                w,
                &json!({
                    "base_period": seq.base_period,
                    "complete": seq.complete,
                    "note": seq.note,
                    "events": events,
                    "gaps": rep.gaps,
                    "deltas": rep.deltas,
                    "b_inf": rep.b_inf,
                    "c_seq": rep.c_seq,
                    "d_seq": rep.d_seq,
                    "gaps_monotone": rep.gaps_monotone,
                    "delta_spread": rep.delta_spread,
                    "accumulation_ratio": ratio,
                }),
            )
        }
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record([
                "rank",
                "t",
                "a",
                "b",
                "kind",
                "period_before",
                "residual",
                "bracket_width",
                "gap",
                "delta",
                "c",
                "d",
                "b_inf",
                "accumulation_ratio",
            ])?;
            let n = seq.events.len();
            for (i, e) in seq.events.iter().enumerate() {
                let last = i + 1 == n;
                wtr.write_record([
                    (i + 1).to_string(),
                    e.t.to_string(),
                    e.params.a.to_string(),
                    e.params.b.to_string(),
                    kind_name(e.kind).to_string(),
                    e.period_before.to_string(),
                    e.residual.to_string(),
                    e.bracket_width.to_string(),
                    fmt_opt((i >= 1).then(|| rep.gaps.get(i - 1).copied()).flatten()),
                    fmt_opt((i >= 2).then(|| rep.deltas.get(i - 2).copied()).flatten()),
                    fmt_opt((i >= 1).then(|| rep.c_seq.get(i - 1).copied()).flatten()),
                    fmt_opt((i >= 3).then(|| rep.d_seq.get(i - 3).copied()).flatten()),
                    fmt_opt(last.then_some(rep.b_inf).flatten()),
                    fmt_opt(last.then_some(ratio).flatten()),
                ])?;
            }
            wtr.flush()
        }
    }
}

fn emit_diagram(
    w: &mut dyn Write,
    format: Format,
    rows: &[feigen::diagram::DiagramRow],
    samples: u32,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({"t": r.t, "fault": r.fault, "xs": r.xs}))
                .collect();
            write_json(w, &json!({ "rows": rows }))
        }
        Format::Csv => {
            let mut wtr = csv_writer(w);
            let mut header = vec!["t".to_string(), "fault".to_string()];
            header.extend((0..samples).map(|i| format!("x{i}")));
            wtr.write_record(&header)?;
            for r in rows {
                let mut record = vec![r.t.to_string(), u8::from(r.fault).to_string()];
                record.extend(r.xs.iter().map(|x| x.to_string()));
                record.resize(header.len(), String::new());
                wtr.write_record(&record)?;
            }
            wtr.flush()
        }
    }
}

fn emit_point_value(w: &mut dyn Write, format: Format, x: f64, s: f64) -> io::Result<()> {
    match format {
        Format::Json => write_json(w, &json!({"x": x, "s": s})),
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record(["x", "s"])?;
            wtr.write_record([x.to_string(), s.to_string()])?;
            wtr.flush()
        }
    }
}

fn emit_profile(
    w: &mut dyn Write,
    format: Format,
    profile: &feigen_core::schwarzian::SignProfile,
) -> io::Result<()> {
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "interval": [profile.interval.0, profile.interval.1],
                "crossings": profile.crossings,
                "segment_signs": profile.segment_signs,
                "poles": profile.poles,
                "notes": profile.notes,
            }),
        ),
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record(["kind", "x", "hi", "sign", "note"])?;
            let mut bounds = vec![profile.interval.0];
            bounds.extend(&profile.crossings);
            bounds.push(profile.interval.1);
            for (i, sign) in profile.segment_signs.iter().enumerate() {
                let lo = bounds.get(i).copied().unwrap_or(profile.interval.0);
                let hi = bounds.get(i + 1).copied().unwrap_or(profile.interval.1);
                wtr.write_record([
                    "segment".to_string(),
                    lo.to_string(),
                    hi.to_string(),
                    sign.to_string(),
                    String::new(),
                ])?;
            }
            for x in &profile.crossings {
                wtr.write_record([
                    "crossing".to_string(),
                    x.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            for x in &profile.poles {
                wtr.write_record([
                    "pole".to_string(),
                    x.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            for note in &profile.notes {
                wtr.write_record([
                    "note".to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    note.clone(),
                ])?;
            }
            wtr.flush()
        }
    }
}

fn emit_readiness(
    w: &mut dyn Write,
    format: Format,
    report: &feigen_core::schwarzian::ReadinessReport,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let maxima: Vec<_> = report
                .maxima
                .iter()
                .map(|m| {
                    json!({
                        "x": m.x, "value": m.value, "degree": m.degree,
                        "fractional": m.fractional,
                    })
                })
                .collect();
            write_json(
                w,
                &json!({
                    "verdict": report.verdict.name(),
                    "maxima": maxima,
                    "endpoint_ok": report.endpoint_ok,
                    "dominance_ok": report.dominance_ok,
                    "core_negative": report.core_negative,
                    "tail_changes": report.tail_changes,
                    "tail_ok": report.tail_ok,
                    "head_changes": report.head_changes,
                    "notes": report.notes,
                }),
            )
        }
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record([
                "verdict",
                "maxima",
                "endpoint_ok",
                "dominance_ok",
                "core_negative",
                "tail_changes",
                "tail_ok",
                "head_changes",
                "notes",
            ])?;
            wtr.write_record([
                report.verdict.name().to_string(),
                report
                    .maxima
                    .iter()
                    .map(|m| m.x.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                report.endpoint_ok.to_string(),
                report.dominance_ok.to_string(),
                report.core_negative.to_string(),
                report.tail_changes.to_string(),
                report.tail_ok.to_string(),
                report.head_changes.to_string(),
                report.notes.join(";"),
            ])?;
            wtr.flush()
        }
    }
}

fn emit_widths(
    w: &mut dyn Write,
    format: Format,
    a: f64,
    report: &feigen_core::bifurcation::TineReport,
) -> io::Result<()> {
    let order = match report.order {
        TineOrder::Ascending => "asc",
        TineOrder::Descending => "desc",
    };
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "a": a,
                "level": report.level,
                "order": order,
                "orbit": report.orbit,
                "pair_widths": report.pair_widths,
                "gaps": report.gaps,
                "alpha_ranks": [report.alpha_ranks.0, report.alpha_ranks.1],
            }),
        ),
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record(["index", "pair_width", "alpha_lo", "alpha_hi", "a", "order"])?;
            for (i, width) in report.pair_widths.iter().enumerate() {
                let first = i == 0;
                wtr.write_record([
                    i.to_string(),
                    width.to_string(),
                    first
                        .then(|| report.alpha_ranks.0.to_string())
                        .unwrap_or_default(),
                    first
                        .then(|| report.alpha_ranks.1.to_string())
                        .unwrap_or_default(),
                    first.then(|| a.to_string()).unwrap_or_default(),
                    first.then(|| order.to_string()).unwrap_or_default(),
                ])?;
            }
            wtr.flush()
        }
    }
}

fn emit_ratio_table(
    w: &mut dyn Write,
    format: Format,
    coarse_a: f64,
    fine_a: f64,
    level: u32,
    table: &[Vec<f64>],
) -> io::Result<()> {
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "coarse_level": level,
                "fine_level": level + 1,
                "coarse_a": coarse_a,
                "fine_a": fine_a,
                "ratios": table,
            }),
        ),
        Format::Csv => {
            let mut wtr = csv_writer(w);
            wtr.write_record(["coarse_index", "fine_index", "ratio"])?;
            for (i, row) in table.iter().enumerate() {
                for (j, r) in row.iter().enumerate() {
                    wtr.write_record([i.to_string(), j.to_string(), r.to_string()])?;
                }
            }
            wtr.flush()
        }
    }
}
