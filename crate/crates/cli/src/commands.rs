//! Command implementations. Each returns the exit status; reports are
//! written once, at the end.

use std::path::{Path, PathBuf};

use osculate::circles::{verify_tait_kneser, STRING_IDENTITY_TOL};
use osculate::conics::{sextactic_scan, verify_theorem5, DEFAULT_SEXTACTIC_GRID};
use osculate::cubics::{spiral_oval_preset, verify_theorem7, DEFAULT_RESOLUTION};
use osculate::curves::{find_vertices, PlaneCurve, DEFAULT_VERTEX_GRID};
use osculate::moebius::{schwarzian_zero_count, verify_theorem6, CircleDiffeo};
use osculate::render::{figure_preset, render_scene, FigurePreset};
use osculate::taylor::{count_derivative_zeros, verify_disjoint_even, verify_disjoint_odd, SmoothFunction, TaylorOptions};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::inputs::{self, Fallible, FunctionSpec};
use crate::{Command, Opts, ScanKind, Theorem};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_BATCH: usize = 100;
pub const DEFAULT_SCHWARZIAN_GRID: usize = 2048;
pub const DEFAULT_DERIVATIVE_GRID: usize = 2000;
pub const DEFAULT_MAX_DERIVATIVE: usize = 8;
pub const DEFAULT_OVAL_SAMPLES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    HypothesisViolated,
    CheckFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::HypothesisViolated => 2,
            Status::CheckFailed => 3,
        }
    }

    fn of(hypothesis: bool, passed: bool) -> Self {
        match (hypothesis, passed) {
            (_, true) => Status::Pass,
            (false, false) => Status::HypothesisViolated,
            (true, false) => Status::CheckFailed,
        }
    }
}

pub fn run(cmd: &Command) -> Fallible<Status> {
    match cmd {
        Command::Verify { theorem, opts } => {
            let v = verify(*theorem, opts)?;
            write_output(opts.out.as_deref(), &pretty(&v.document(opts)))?;
            Ok(v.status())
        }
        Command::Scan { kind, opts } => {
            let s = scan(*kind, opts)?;
            write_output(opts.out.as_deref(), &s.csv)?;
            Ok(s.status())
        }
        Command::Figure { preset, out } => figure(preset, out.clone()),
        Command::Report { opts } => report(opts),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn write_output(path: Option<&Path>, text: &str) -> Fallible<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Verified {
    theorem: Theorem,
    input: Value,
    samples: usize,
    tol: Option<f64>,
    resolution: Option<usize>,
    hypothesis: bool,
    passed: bool,
    report: Value,
}

impl Verified {
    fn status(&self) -> Status {
        Status::of(self.hypothesis, self.passed)
    }

    fn document(&self, opts: &Opts) -> Value {
        json!({
            "schema": SCHEMA,
            "command": "verify",
            "theorem": theorem_name(self.theorem),
            "params": {
                "samples": self.samples,
                "seed": opts.seed,
                "tol": self.tol,
                "resolution": self.resolution,
            },
            "input": self.input,
            "hypothesis_holds": self.hypothesis,
            "passed": self.passed,
            "exit_code": self.status().code(),
            "report": self.report,
        })
    }
}

fn theorem_name(t: Theorem) -> &'static str {
    match t {
        Theorem::TaitKneser => "tait_kneser",
        Theorem::TaylorEven => "taylor_even",
        Theorem::TaylorOdd => "taylor_odd",
        Theorem::Conics => "conics",
        Theorem::Moebius => "moebius",
        Theorem::CubicOvals => "cubic_ovals",
    }
}

fn scan_name(k: ScanKind) -> &'static str {
    match k {
        ScanKind::Vertices => "vertices",
        ScanKind::Sextactic => "sextactic",
        ScanKind::SchwarzianZeros => "schwarzian_zeros",
        ScanKind::DerivativeZeros => "derivative_zeros",
    }
}

fn curve_or(opts: &Opts, default: impl FnOnce() -> PlaneCurve) -> Fallible<PlaneCurve> {
    match &opts.curve {
        Some(p) => inputs::load_curve(p),
        None => Ok(default()),
    }
}

fn function_or(opts: &Opts, default: impl FnOnce() -> FunctionSpec) -> Fallible<FunctionSpec> {
    match &opts.curve {
        Some(p) => inputs::load_function(p),
        None => Ok(default()),
    }
}

fn reject(flag: &str, value_given: bool, context: &str) -> Fallible<()> {
    if value_given {
        return Err(format!("--{flag} does not apply to {context}").into());
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn verify(theorem: Theorem, opts: &Opts) -> Fallible<Verified> {
    let name = theorem_name(theorem);
    if theorem != Theorem::TaitKneser {
        reject("tol", opts.tol.is_some(), name)?;
    }
    if theorem != Theorem::CubicOvals {
        reject("resolution", opts.resolution.is_some(), name)?;
    }
    let mut v = Verified {
        theorem,
        input: Value::Null,
        samples: 0,
        tol: None,
        resolution: None,
        hypothesis: false,
        passed: false,
        report: Value::Null,
    };
    match theorem {
        Theorem::TaitKneser => {
            let c = curve_or(opts, || inputs::default_spiral(inputs::TAIT_KNESER_SPAN))?;
            let n = opts.samples.unwrap_or(100);
            let tol = opts.tol.unwrap_or(STRING_IDENTITY_TOL);
            if !(tol > 0.0) {
                return Err("--tol must be positive".into());
            }
            let mut r = verify_tait_kneser(&c, n)?;
            r.string_identity_holds = r.string_defects.iter().all(|d| *d < tol);
            v.input = to_value(&c);
            v.samples = n;
            v.tol = Some(tol);
            v.hypothesis = r.report.monotone_curvature;
            v.passed = r.report.passed && r.string_identity_holds;
            v.report = to_value(&r);
        }
        Theorem::TaylorEven | Theorem::TaylorOdd => {
            let even = theorem == Theorem::TaylorEven;
            let spec = function_or(opts, || inputs::default_taylor(if even { 2 } else { 3 }))?;
            let n = spec.degree.ok_or("function spec needs a degree")?;
            let opts_t = TaylorOptions {
                samples: opts.samples.unwrap_or(20),
                ..TaylorOptions::default()
            };
            let r = if even {
                verify_disjoint_even(&spec.function, spec.interval, n, &opts_t)?
            } else {
                verify_disjoint_odd(&spec.function, spec.interval, n, &opts_t)?
            };
            v.input = to_value(&spec);
            v.samples = opts_t.samples;
            v.hypothesis = r.hypothesis_holds;
            v.passed = r.passed;
            v.report = to_value(&r);
        }
        Theorem::Conics => {
            let c = curve_or(opts, || inputs::default_spiral(inputs::CONIC_SPAN))?;
            let n = opts.samples.unwrap_or(40);
            let r = verify_theorem5(&c, n)?;
            v.input = to_value(&c);
            v.samples = n;
            v.hypothesis = r.report.monotone_curvature;
            v.passed = r.report.passed;
            v.report = to_value(&r);
        }
        Theorem::Moebius => {
            let spec = function_or(opts, inputs::default_moebius)?;
            let n = opts.samples.unwrap_or(30);
            let r = verify_theorem6(&spec.function, spec.interval, n)?;
            v.input = to_value(&spec);
            v.samples = n;
            v.hypothesis = r.hypothesis_holds;
            v.passed = r.passed;
            v.report = to_value(&r);
        }
        Theorem::CubicOvals => {
            let res = opts.resolution.unwrap_or(DEFAULT_RESOLUTION);
            v.resolution = Some(res);
            match &opts.curve {
                Some(p) => {
                    let c = inputs::load_curve(p)?;
                    let n = opts.samples.unwrap_or(DEFAULT_OVAL_SAMPLES);
                    let r = verify_theorem7(&c, n, None, res)?;
                    v.input = to_value(&c);
                    v.samples = n;
                    v.hypothesis = r.report.monotone_curvature;
                    v.passed = r.report.passed;
                    v.report = to_value(&r);
                }
                None => {
                    reject("samples", opts.samples.is_some(), "the spiral oval preset search")?;
                    match spiral_oval_preset(res) {
                        Ok(p) => {
                            v.input = to_value(&p.curve);
                            v.samples = p.result.report.samples.len();
                            v.hypothesis = p.result.report.monotone_curvature;
                            v.passed = p.result.report.passed;
                            v.report = to_value(&p);
                        }
                        Err(osculate::Error::PresetFailed { reason, .. }) => {
                            v.hypothesis = true;
                            v.report = json!({ "preset_search_failed": reason });
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    Ok(v)
}

struct Scanned {
    kind: ScanKind,
    rows: usize,
    failures: usize,
    csv: String,
}

impl Scanned {
    fn status(&self) -> Status {
        if self.failures == 0 {
            Status::Pass
        } else {
            Status::CheckFailed
        }
    }
}

fn closed_curves(opts: &Opts) -> Fallible<Vec<PlaneCurve>> {
    match &opts.curve {
        Some(p) => {
            reject("samples", opts.samples.is_some(), "a single curve")?;
            Ok(vec![inputs::load_curve(p)?])
        }
        None => Ok(PlaneCurve::fourier_oval_batch(opts.seed, opts.samples.unwrap_or(DEFAULT_BATCH))),
    }
}

fn scan(kind: ScanKind, opts: &Opts) -> Fallible<Scanned> {
    reject("tol", opts.tol.is_some(), scan_name(kind))?;
    let header: &str;
    let mut lines: Vec<(String, bool)> = Vec::new();
    let mut row = |line: String, ok: bool| lines.push((line, ok));
    match kind {
        ScanKind::Vertices | ScanKind::Sextactic => {
            let vertices = kind == ScanKind::Vertices;
            let (grid, minimum) = if vertices {
                (opts.resolution.unwrap_or(DEFAULT_VERTEX_GRID), 4)
            } else {
                (opts.resolution.unwrap_or(DEFAULT_SEXTACTIC_GRID), 6)
            };
            let curves = closed_curves(opts)?;
            if curves.iter().any(|c| !c.closed) {
                return Err("counting scans need a closed curve".into());
            }
            header = if vertices {
                "instance,count,even,at_least_4"
            } else {
                "instance,count,even,at_least_6"
            };
            let counts = curves
                .par_iter()
                .map(|c| {
                    Ok(if vertices {
                        find_vertices(c, grid)?.len()
                    } else {
                        sextactic_scan(c, grid)?.count
                    })
                })
                .collect::<osculate::Result<Vec<usize>>>()?;
            for (i, count) in counts.into_iter().enumerate() {
                let (even, enough) = (count % 2 == 0, count >= minimum);
                row(format!("{i},{count},{even},{enough}"), even && enough);
            }
        }
        ScanKind::SchwarzianZeros => {
            let grid = opts.resolution.unwrap_or(DEFAULT_SCHWARZIAN_GRID);
            let maps: Vec<CircleDiffeo> = match &opts.curve {
                Some(p) => {
                    reject("samples", opts.samples.is_some(), "a single diffeomorphism")?;
                    vec![inputs::load_diffeo(p)?]
                }
                None => CircleDiffeo::batch(opts.seed, opts.samples.unwrap_or(DEFAULT_BATCH)),
            };
            header = "instance,count,degenerate,even,at_least_4";
            let zeros = maps
                .par_iter()
                .map(|f| schwarzian_zero_count(f, grid))
                .collect::<osculate::Result<Vec<_>>>()?;
            for (i, z) in zeros.into_iter().enumerate() {
                let (even, enough) = (z.count % 2 == 0, z.count >= 4);
                row(
                    format!("{i},{},{},{even},{enough}", z.count, z.degenerate),
                    z.degenerate || (even && enough),
                );
            }
        }
        ScanKind::DerivativeZeros => {
            let grid = opts.resolution.unwrap_or(DEFAULT_DERIVATIVE_GRID);
            let spec = function_or(opts, inputs::default_gaussian)?;
            if spec.function != SmoothFunction::Gaussian {
                return Err("derivative_zeros supports the gaussian family only".into());
            }
            let max = opts.samples.unwrap_or(DEFAULT_MAX_DERIVATIVE);
            header = "n,count,expected,window_warning";
            for n in 1..=max {
                let z = count_derivative_zeros(&spec.function, n, spec.interval, grid)?;
                row(
                    format!("{n},{},{n},{}", z.count, z.window_warning),
                    z.count == n,
                );
            }
        }
    }
    let mut csv = format!("{header}\n");
    for (line, _) in &lines {
        csv.push_str(line);
        csv.push('\n');
    }
    Ok(Scanned {
        kind,
        rows: lines.len(),
        failures: lines.iter().filter(|l| !l.1).count(),
        csv,
    })
}

fn figure(preset: &str, out: Option<PathBuf>) -> Fallible<Status> {
    let p: FigurePreset = preset.parse()?;
    let scene = match figure_preset(p) {
        Ok(s) => s,
        Err(e @ osculate::Error::PresetFailed { .. }) => {
            eprintln!("error: {e}");
            return Ok(Status::CheckFailed);
        }
        Err(e) => return Err(e.into()),
    };
    let svg = render_scene(&scene)?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}.svg", p.as_str())));
    write_output(Some(&path), &svg)?;
    Ok(Status::Pass)
}

const ALL_THEOREMS: [Theorem; 6] = [
    Theorem::TaitKneser,
    Theorem::TaylorEven,
    Theorem::TaylorOdd,
    Theorem::Conics,
    Theorem::Moebius,
    Theorem::CubicOvals,
];

const ALL_SCANS: [ScanKind; 4] = [
    ScanKind::Vertices,
    ScanKind::Sextactic,
    ScanKind::SchwarzianZeros,
    ScanKind::DerivativeZeros,
];

fn report(opts: &Opts) -> Fallible<Status> {
    if opts.curve.is_some() || opts.tol.is_some() || opts.resolution.is_some() {
        return Err("report takes only --samples, --seed and --out".into());
    }
    let mut verifications = Vec::new();
    let mut all = true;
    for t in ALL_THEOREMS {
        let v = verify(t, &Opts { samples: None, ..opts.clone() })?;
        all &= v.passed;
        verifications.push(json!({
            "theorem": theorem_name(t),
            "hypothesis_holds": v.hypothesis,
            "passed": v.passed,
            "samples": v.samples,
        }));
    }
    let mut scans = Vec::new();
    for k in ALL_SCANS {
        let scan_opts = Opts {
            samples: if k == ScanKind::DerivativeZeros { None } else { opts.samples },
            ..opts.clone()
        };
        let s = scan(k, &scan_opts)?;
        all &= s.failures == 0;
        scans.push(json!({
            "kind": scan_name(s.kind),
            "instances": s.rows,
            "failures": s.failures,
        }));
    }
    let doc = json!({
        "schema": SCHEMA,
        "command": "report",
        "params": { "samples": opts.samples, "seed": opts.seed },
        "verifications": verifications,
        "scans": scans,
        "passed": all,
    });
    write_output(opts.out.as_deref(), &pretty(&doc))?;
    Ok(if all { Status::Pass } else { Status::CheckFailed })
}
